// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "kdlca/kd/scorer.hpp"
#include "kdlca/kd/trace.hpp"

namespace kdlca::kd {

struct Hypothesis {
  std::vector<TokenId> tokens;  ///< includes the end-of-sequence token when finished
  double log_prob = 0.0;
  bool finished = false;

  /// log_prob / len^length_penalty.
  [[nodiscard]] double score(double length_penalty) const noexcept;
};

/// Higher score first; equal scores fall back to the lexicographically
/// smaller token sequence.
bool better_hypothesis(const Hypothesis& l, const Hypothesis& r, double length_penalty) noexcept;

struct BeamConfig {
  std::size_t beam = 1;
  std::size_t max_len = 1;
  double length_penalty = 0.0;
};

struct BeamResult {
  Hypothesis best;
  /// Final beam: finished and still-active hypotheses, best first, at most B.
  std::vector<Hypothesis> candidates;
  /// False when nothing emitted end-of-sequence within max_len; `best` is
  /// then the best unfinished hypothesis.
  bool completed = false;
};

/// Keeps the top-B expansions by accumulated log-probability each step,
/// freezes hypotheses that emit end-of-sequence, and returns the best finished
/// hypothesis by length-penalized score. Zero-probability tokens are never
/// expanded. The trace is charged |source| encoder steps once and B decoder
/// steps per expansion step.
BeamResult beam_search(const Scorer& scorer, std::span<const TokenId> source,
                       const BeamConfig& config, ComputeTrace& trace);

/// Argmax decoding; ties pick the smallest token id.
Hypothesis greedy_decode(const Scorer& scorer, std::span<const TokenId> source,
                         std::size_t max_len);

}  // namespace kdlca::kd
