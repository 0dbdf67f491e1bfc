// SPDX-License-Identifier: Apache-2.0
//
// Paired percentile bootstrap over documents. One set of resampled document
// index vectors is drawn from the seed and shared by every system, so the
// intervals of different systems are computed on the same resamples.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kdlca {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  [[nodiscard]] bool overlaps(const Interval& other) const noexcept {
    return lower <= other.upper && other.lower <= upper;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Rows are systems, columns documents.
using ScoreMatrix = std::vector<std::vector<double>>;

inline constexpr std::size_t kDefaultResamples = 1000;
inline constexpr double kDefaultConfidenceLevel = 0.95;

/// 1-based order statistics (lower, upper) used for a percentile interval:
/// lower = max(1, ceil(n (1 - level) / 2)), upper = n + 1 - lower.
/// For n = 1000 at 0.95 these are the 25th and 976th.
std::pair<std::size_t, std::size_t> percentile_ranks(std::size_t n_resamples, double level);

/// Document-index vectors of the paired resampling; deterministic in the seed.
std::vector<std::vector<std::size_t>> resample_indices(std::size_t n_documents,
                                                       std::size_t n_resamples,
                                                       std::uint64_t seed);

/// Per-system percentile intervals of the resampled mean. Throws RaggedMatrix
/// on unequal document counts.
std::vector<Interval> paired_bootstrap_ci(const ScoreMatrix& scores, std::size_t n_resamples,
                                          double level, std::uint64_t seed);

/// True iff the paired intervals are disjoint and mean(a) > mean(b).
bool significant_improvement(std::span<const double> a_scores, std::span<const double> b_scores,
                             std::size_t n_resamples, std::uint64_t seed,
                             double level = kDefaultConfidenceLevel);

double mean(std::span<const double> values);

}  // namespace kdlca
