// SPDX-License-Identifier: Apache-2.0
#include "kdlca/token_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "kdlca/error.hpp"

namespace kdlca {

TokenDistribution TokenDistribution::from_probs(std::vector<double> probs) {
  if (probs.empty()) {
    throw Error(ErrorCode::NotNormalized, "distribution over an empty vocabulary");
  }
  for (double p : probs) {
    if (!(p >= 0.0)) throw Error(ErrorCode::NotNormalized, "negative or NaN probability");
  }
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    throw Error(ErrorCode::NotNormalized, fmt::format("probabilities sum to {:.17g}", sum));
  }
  return TokenDistribution(std::move(probs));
}

TokenDistribution TokenDistribution::from_logits(std::span<const double> logits) {
  if (logits.empty()) {
    throw Error(ErrorCode::NotNormalized, "distribution over an empty vocabulary");
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> probs(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - peak);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return from_probs(std::move(probs));
}

TokenDistribution TokenDistribution::one_hot(std::size_t vocab_size, TokenId token) {
  if (token >= vocab_size) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("token {} outside vocabulary of size {}", token, vocab_size));
  }
  std::vector<double> probs(vocab_size, 0.0);
  probs[token] = 1.0;
  return TokenDistribution(std::move(probs));
}

TokenDistribution TokenDistribution::uniform(std::size_t vocab_size) {
  if (vocab_size == 0) throw Error(ErrorCode::NotNormalized, "empty vocabulary");
  return TokenDistribution(std::vector<double>(vocab_size, 1.0 / static_cast<double>(vocab_size)));
}

TokenId TokenDistribution::argmax() const noexcept {
  return static_cast<TokenId>(std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
}

bool TokenDistribution::is_one_hot() const noexcept {
  std::size_t ones = 0;
  for (double p : probs_) {
    if (p == 1.0) {
      ++ones;
    } else if (p != 0.0) {
      return false;
    }
  }
  return ones == 1;
}

}  // namespace kdlca
