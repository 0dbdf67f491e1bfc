// SPDX-License-Identifier: Apache-2.0
#include "kdlca/kd/fixtures.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "kdlca/error.hpp"
#include "kdlca/random.hpp"

namespace kdlca::kd {

TableScorer::TableScorer(std::size_t vocab_size, std::optional<TokenId> eos,
                         std::map<std::vector<TokenId>, TokenDistribution> table,
                         TokenDistribution fallback)
    : vocab_size_(vocab_size),
      eos_(eos),
      table_(std::move(table)),
      fallback_(std::move(fallback)) {
  if (fallback_.size() != vocab_size_) {
    throw Error(ErrorCode::LengthMismatch, "fallback distribution size differs from vocabulary");
  }
  for (const auto& [prefix, dist] : table_) {
    if (dist.size() != vocab_size_) {
      throw Error(ErrorCode::LengthMismatch, "table distribution size differs from vocabulary");
    }
  }
}

TokenDistribution TableScorer::next(std::span<const TokenId> /*source*/,
                                    std::span<const TokenId> prefix) const {
  const auto it = table_.find(std::vector<TokenId>(prefix.begin(), prefix.end()));
  return it == table_.end() ? fallback_ : it->second;
}

HashScorer::HashScorer(Options options) : options_(options) {
  if (options_.vocab_size < 2) {
    throw Error(ErrorCode::InvalidArgument, "hash scorer needs at least two tokens");
  }
  if (options_.eos && *options_.eos >= options_.vocab_size) {
    throw Error(ErrorCode::InvalidArgument, "end-of-sequence token outside vocabulary");
  }
  if (!(options_.temperature > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "temperature must be positive");
  }
}

TokenDistribution HashScorer::next(std::span<const TokenId> source,
                                   std::span<const TokenId> prefix) const {
  const std::size_t vocab = options_.vocab_size;
  const auto eos = options_.eos;

  if (eos && options_.fixed_length && prefix.size() >= source.size()) {
    return TokenDistribution::one_hot(vocab, *eos);
  }

  std::uint64_t h = splitmix64(options_.salt);
  for (TokenId t : source) h = splitmix64(h ^ (0x100000000ULL | t));
  h = splitmix64(h ^ 0xfeedULL);
  for (TokenId t : prefix) h = splitmix64(h ^ (0x200000000ULL | t));

  std::vector<double> logits(vocab);
  for (std::size_t v = 0; v < vocab; ++v) {
    const std::uint64_t bits = splitmix64(h ^ (0x300000000ULL | v));
    const double unit = static_cast<double>(bits >> 11) * 0x1.0p-53;
    logits[v] = (4.0 * unit - 2.0) / options_.temperature;
  }
  if (eos) {
    if (options_.fixed_length) {
      logits[*eos] = -std::numeric_limits<double>::infinity();
    } else {
      logits[*eos] += options_.eos_bias * static_cast<double>(prefix.size());
    }
  }
  return TokenDistribution::from_logits(logits);
}

namespace {

HashScorer::Options teacher_options(bool fixed_length) {
  return {8, TokenId{0}, 0x7eac4e5ULL, 0.6, 0.6, fixed_length};
}

HashScorer::Options student_options(bool fixed_length) {
  return {8, TokenId{0}, 0x5d0de47ULL, 1.4, 0.4, fixed_length};
}

}  // namespace

std::vector<std::string_view> fixture_names() { return {"hash_v8", "fixed_length_v8"}; }

FixturePair make_fixture(std::string_view name) {
  bool fixed_length = false;
  if (name == "fixed_length_v8") {
    fixed_length = true;
  } else if (name != "hash_v8") {
    throw Error(ErrorCode::UnknownFixture, fmt::format("unknown scorer fixture '{}'", name));
  }
  return {std::make_unique<HashScorer>(teacher_options(fixed_length)),
          std::make_unique<HashScorer>(student_options(fixed_length))};
}

}  // namespace kdlca::kd
