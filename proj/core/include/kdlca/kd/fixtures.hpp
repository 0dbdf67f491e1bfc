// SPDX-License-Identifier: Apache-2.0
//
// Deterministic toy scorers standing in for teacher and student networks.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string_view>
#include <vector>

#include "kdlca/kd/scorer.hpp"

namespace kdlca::kd {

/// Lookup table keyed by prefix; the source is ignored. Prefixes without an
/// entry fall back to `fallback`.
class TableScorer final : public Scorer {
 public:
  TableScorer(std::size_t vocab_size, std::optional<TokenId> eos,
              std::map<std::vector<TokenId>, TokenDistribution> table,
              TokenDistribution fallback);

  [[nodiscard]] std::size_t vocab_size() const override { return vocab_size_; }
  [[nodiscard]] std::optional<TokenId> eos() const override { return eos_; }
  [[nodiscard]] TokenDistribution next(std::span<const TokenId> source,
                                       std::span<const TokenId> prefix) const override;

 private:
  std::size_t vocab_size_;
  std::optional<TokenId> eos_;
  std::map<std::vector<TokenId>, TokenDistribution> table_;
  TokenDistribution fallback_;
};

/// Softmax of logits hashed from (salt, source, prefix, token). With an
/// end-of-sequence token, its logit grows by `eos_bias` per emitted token.
/// With `fixed_length`, end-of-sequence has probability zero before
/// |source| tokens and one at exactly |source| tokens.
class HashScorer final : public Scorer {
 public:
  struct Options {
    std::size_t vocab_size = 8;
    std::optional<TokenId> eos = 0;
    std::uint64_t salt = 0;
    double temperature = 1.0;
    double eos_bias = 0.5;
    bool fixed_length = false;
  };

  explicit HashScorer(Options options);

  [[nodiscard]] std::size_t vocab_size() const override { return options_.vocab_size; }
  [[nodiscard]] std::optional<TokenId> eos() const override { return options_.eos; }
  [[nodiscard]] TokenDistribution next(std::span<const TokenId> source,
                                       std::span<const TokenId> prefix) const override;

 private:
  Options options_;
};

/// Teacher/student pair for a named fixture: "hash_v8" or "fixed_length_v8".
/// Throws UnknownFixture.
struct FixturePair {
  std::unique_ptr<Scorer> teacher;
  std::unique_ptr<Scorer> student;
};

FixturePair make_fixture(std::string_view name);
std::vector<std::string_view> fixture_names();

}  // namespace kdlca::kd
