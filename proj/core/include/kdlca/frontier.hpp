// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kdlca/bootstrap.hpp"
#include "kdlca/units.hpp"

namespace kdlca {

struct FrontierPoint {
  std::string system_name;
  /// Checkpoint family; points of one group form a checkpoint sequence.
  std::string group;
  double production_footprint_kgco2e = 0.0;
  double mean_quality = 0.0;
  Interval quality_ci;
  bool on_frontier = false;
};

/// Marks every point no other point weakly beats on both axes with one strict
/// inequality. Returns all points sorted by ascending footprint (ties: higher
/// quality first, then name); tied identical points all stay on the frontier.
std::vector<FrontierPoint> pareto_frontier(std::vector<FrontierPoint> points);

/// Within each group, drops a checkpoint when a lower-footprint checkpoint of
/// the same group already reaches at least its quality.
std::vector<FrontierPoint> drop_non_improving_checkpoints(std::vector<FrontierPoint> points);

/// Frontier points from profiles with paired-bootstrap intervals. The interval
/// is widened to contain the point estimate when the percentile bounds miss it.
std::vector<FrontierPoint> frontier_points(std::span<const SystemProfile> profiles,
                                           std::size_t n_resamples, double level,
                                           std::uint64_t seed);

enum class Verdict { UseTeacher, UseNoKD, UseKDStudent };

std::string_view to_string(Verdict verdict) noexcept;

struct RuleFiring {
  /// 1 functional unit, 2 No-KD baseline, 3 low-overhead KD, 4 Pareto selection.
  int step = 0;
  std::string message;
};

struct Recommendation {
  Verdict verdict = Verdict::UseTeacher;
  std::optional<std::string> system;  ///< the chosen system's name
  std::vector<RuleFiring> rationale;
  std::optional<double> breakeven_tokens_vs_teacher;
  bool quality_gap_significant = false;
};

std::string_view step_title(int step) noexcept;

/// Four-step selection: a No-KD baseline that meets the target wins outright;
/// otherwise KD students that meet the target and significantly beat No-KD are
/// reduced to their Pareto frontier, the cheapest to produce is picked, and it
/// is kept only if the expected volume reaches its break-even against the
/// teacher. Throws NoTeacherProfile or NoBaselineProfile.
Recommendation recommend(std::span<const SystemProfile> profiles, double target_quality,
                         double expected_volume_tokens, std::size_t n_resamples,
                         std::uint64_t seed, double level = kDefaultConfidenceLevel);

}  // namespace kdlca
