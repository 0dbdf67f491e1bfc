// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kdlca {

using TokenId = std::uint32_t;

inline constexpr double kProbabilityTolerance = 1e-9;

/// Probability vector over a vocabulary. Construction enforces nonnegative
/// entries summing to one within kProbabilityTolerance.
class TokenDistribution {
 public:
  static TokenDistribution from_probs(std::vector<double> probs);
  /// Numerically stable softmax.
  static TokenDistribution from_logits(std::span<const double> logits);
  static TokenDistribution one_hot(std::size_t vocab_size, TokenId token);
  static TokenDistribution uniform(std::size_t vocab_size);

  [[nodiscard]] std::span<const double> probs() const noexcept { return probs_; }
  [[nodiscard]] std::size_t size() const noexcept { return probs_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return probs_[i]; }
  /// Smallest index among maximal entries.
  [[nodiscard]] TokenId argmax() const noexcept;
  [[nodiscard]] bool is_one_hot() const noexcept;

 private:
  explicit TokenDistribution(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

}  // namespace kdlca
