// SPDX-License-Identifier: Apache-2.0
//
// Word-level distillation losses over explicit token distributions.
//
//   CE(y, p)        = -log p[y]
//   KL(t || s)      = sum_v t[v] (log t[v] - log s[v]),  t[v] = 0 terms vanish
//   L_word-kd       = (1 - alpha) sum_t CE(y_t, s_t) + alpha sum_{t in mask} KL(t_t || s_t)
//
// Student probabilities are floored at kProbabilityFloor inside logs.
#pragma once

#include <span>
#include <vector>

#include "kdlca/token_distribution.hpp"

namespace kdlca::kd {

inline constexpr double kProbabilityFloor = 1e-12;

/// Per-position selection; an empty mask means every position is selected.
using TokenMask = std::vector<bool>;

double cross_entropy(TokenId target, const TokenDistribution& pred);
/// `target` must be one-hot.
double cross_entropy(const TokenDistribution& target, const TokenDistribution& pred);

double kl_divergence(const TokenDistribution& teacher, const TokenDistribution& student);

/// Throws LengthMismatch when sequence or mask lengths disagree.
double word_kd_loss(std::span<const TokenId> refs, std::span<const TokenDistribution> teacher,
                    std::span<const TokenDistribution> student, double alpha,
                    const TokenMask& mask = {});

/// Token-selective supervision. HardestFraction approximates selective KD
/// (difficulty = student cross-entropy against the reference);
/// TeacherTop1Margin approximates confidence-focused KD (largest teacher
/// top-1 probability). Both keep ceil(r * T) positions, earliest first on ties.
struct SelectionStrategy {
  enum class Kind { All, HardestFraction, TeacherTop1Margin };

  Kind kind = Kind::All;
  double fraction = 1.0;

  static SelectionStrategy all() noexcept { return {}; }
  static SelectionStrategy hardest(double r);
  static SelectionStrategy teacher_confident(double r);
};

TokenMask selection_mask(const SelectionStrategy& strategy, std::span<const TokenId> refs,
                         std::span<const TokenDistribution> teacher,
                         std::span<const TokenDistribution> student);

}  // namespace kdlca::kd
