// SPDX-License-Identifier: Apache-2.0
#include "kdlca/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "kdlca/error.hpp"
#include "kdlca/random.hpp"

namespace kdlca {

double mean(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "mean of an empty vector");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::pair<std::size_t, std::size_t> percentile_ranks(std::size_t n_resamples, double level) {
  if (n_resamples == 0) throw Error(ErrorCode::InvalidArgument, "n_resamples must be >= 1");
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("confidence level {} not in (0, 1)", level));
  }
  const double tail = (1.0 - level) / 2.0 * static_cast<double>(n_resamples);
  // (1 - 0.95) / 2 * 1000 evaluates to 25.000000000000018; absorb that residue.
  auto lower = static_cast<std::size_t>(std::ceil(tail - 1e-9));
  lower = std::clamp<std::size_t>(lower, 1, n_resamples);
  const std::size_t upper = n_resamples + 1 - lower;
  return {std::min(lower, upper), std::max(lower, upper)};
}

std::vector<std::vector<std::size_t>> resample_indices(std::size_t n_documents,
                                                       std::size_t n_resamples,
                                                       std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<std::vector<std::size_t>> out(n_resamples, std::vector<std::size_t>(n_documents));
  for (auto& draw : out) {
    for (auto& index : draw) index = draw_index(engine, n_documents);
  }
  return out;
}

std::vector<Interval> paired_bootstrap_ci(const ScoreMatrix& scores, std::size_t n_resamples,
                                          double level, std::uint64_t seed) {
  const auto [lower_rank, upper_rank] = percentile_ranks(n_resamples, level);
  if (scores.empty()) return {};
  const std::size_t n_docs = scores.front().size();
  for (const auto& row : scores) {
    if (row.size() != n_docs) {
      throw Error(ErrorCode::RaggedMatrix,
                  fmt::format("score rows have {} and {} documents", n_docs, row.size()));
    }
  }
  if (n_docs == 0) throw Error(ErrorCode::RaggedMatrix, "score matrix has no documents");

  const auto draws = resample_indices(n_docs, n_resamples, seed);
  std::vector<Interval> out;
  out.reserve(scores.size());
  std::vector<double> means(n_resamples);
  for (const auto& row : scores) {
    for (std::size_t r = 0; r < n_resamples; ++r) {
      double sum = 0.0;
      for (std::size_t index : draws[r]) sum += row[index];
      means[r] = sum / static_cast<double>(n_docs);
    }
    std::sort(means.begin(), means.end());
    out.push_back({means[lower_rank - 1], means[upper_rank - 1]});
  }
  return out;
}

bool significant_improvement(std::span<const double> a_scores, std::span<const double> b_scores,
                             std::size_t n_resamples, std::uint64_t seed, double level) {
  if (a_scores.size() != b_scores.size()) {
    throw Error(ErrorCode::RaggedMatrix,
                fmt::format("paired comparison of {} vs {} documents", a_scores.size(),
                            b_scores.size()));
  }
  const ScoreMatrix matrix{{a_scores.begin(), a_scores.end()}, {b_scores.begin(), b_scores.end()}};
  const auto ci = paired_bootstrap_ci(matrix, n_resamples, level, seed);
  return !ci[0].overlaps(ci[1]) && mean(a_scores) > mean(b_scores);
}

}  // namespace kdlca
