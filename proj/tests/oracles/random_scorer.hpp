// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <span>
#include <vector>

#include "kdlca/kd/scorer.hpp"
#include "kdlca/random.hpp"

namespace testutil {

using kdlca::TokenDistribution;
using kdlca::TokenId;

/// Random distributions per prefix, some entries exactly zero.
class RandomPrefixScorer final : public kdlca::kd::Scorer {
 public:
  RandomPrefixScorer(std::size_t vocab, std::uint64_t seed, double zero_rate)
      : vocab_(vocab), seed_(seed), zero_rate_(zero_rate) {}

  std::size_t vocab_size() const override { return vocab_; }
  std::optional<TokenId> eos() const override { return 0; }
  TokenDistribution next(std::span<const TokenId>, std::span<const TokenId> prefix) const override {
    return TokenDistribution::from_probs(probs(prefix));
  }

  std::vector<double> probs(std::span<const TokenId> prefix) const {
    std::uint64_t h = seed_;
    for (TokenId t : prefix) h = kdlca::splitmix64(h ^ (t + 0x9e37ULL));
    std::mt19937_64 rng(h);
    std::vector<double> p(vocab_);
    double sum = 0.0;
    for (auto& v : p) {
      v = kdlca::draw_unit(rng) < zero_rate_ ? 0.0 : 0.05 + kdlca::draw_unit(rng);
      sum += v;
    }
    if (sum == 0.0) {
      p[1 + kdlca::draw_index(rng, vocab_ - 1)] = 1.0;
      sum = 1.0;
    }
    for (auto& v : p) v /= sum;
    return p;
  }

 private:
  std::size_t vocab_;
  std::uint64_t seed_;
  double zero_rate_;
};

}  // namespace testutil
