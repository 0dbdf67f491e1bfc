// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kdlca/units.hpp"

namespace kdlca {

enum class BreakEvenRelation {
  CrossesAt,
  /// A's total is never above B's for X >= 0.
  ADominates,
  BDominates,
  Identical,
};

std::string_view to_string(BreakEvenRelation relation) noexcept;

struct BreakEvenResult {
  std::string system_a;
  std::string system_b;
  std::optional<double> breakeven_tokens;  ///< present iff relation == CrossesAt
  BreakEvenRelation relation = BreakEvenRelation::Identical;
};

/// Solves I_a + X c_a = I_b + X c_b on X >= 0. Equal intercepts with different
/// slopes cross at X* = 0.
BreakEvenResult break_even(const SystemProfile& a, const SystemProfile& b);

struct CostPoint {
  double tokens = 0.0;
  double footprint_kgco2e = 0.0;
};

struct LinearCostModel {
  double intercept_kgco2e = 0.0;
  double slope_kgco2e_per_token = 0.0;
  /// Sum of squared residuals over every input point, including an excluded one.
  double fit_sse = 0.0;
  /// Sum of absolute residuals over every input point.
  double fit_abs_error = 0.0;
  std::optional<std::size_t> excluded_point_index;
  std::size_t candidates_evaluated = 0;

  /// Emissions cannot fall as tokens grow; negative slopes are flagged, not clamped.
  [[nodiscard]] bool accepted() const noexcept { return slope_kgco2e_per_token >= 0.0; }
  [[nodiscard]] double predict(double tokens) const noexcept {
    return intercept_kgco2e + slope_kgco2e_per_token * tokens;
  }
};

/// Ordinary least squares on all points. Throws DegenerateFit when every
/// token value is identical and TooFewPoints below two points.
LinearCostModel ols_fit(std::span<const CostPoint> points);

/// Every leave-one-out OLS candidate with its errors over all points.
/// Candidates whose remaining points are degenerate are skipped.
std::vector<LinearCostModel> loo_candidates(std::span<const CostPoint> points);

/// How candidates are compared on all points. Squared error favours the
/// candidate closest to plain OLS, which keeps a gross outlier in the fit;
/// absolute error selects the candidate that drops it.
enum class LooCriterion { AbsoluteError, SquaredError };

/// The leave-one-out candidate with minimum error over all points; ties keep
/// the lowest excluded index. Needs at least three points.
LinearCostModel loo_robust_fit(std::span<const CostPoint> points,
                               LooCriterion criterion = LooCriterion::AbsoluteError);

struct ScalingCell {
  std::uint32_t batch_size = 0;
  BreakEvenResult result;
};

struct ScalingRow {
  std::string system;
  std::vector<ScalingCell> cells;  ///< ascending batch size
};

using FitKey = std::pair<std::string, std::uint32_t>;  ///< (system, batch size)
using FitTable = std::map<FitKey, LinearCostModel>;

/// Break-even tokens against the teacher per batch size, pairing each
/// production footprint with the fitted slope at that batch size. Throws
/// MissingTeacherFit when a system has a fit at a batch size the teacher lacks.
std::vector<ScalingRow> scaling_table(std::span<const SystemProfile> profiles,
                                      const FitTable& fits, const SystemProfile& teacher);

/// Fits one model per (system, batch size) from infer-phase records carrying
/// tokens and a batch size; every repeat is its own point. Groups with fewer
/// than three points are skipped.
FitTable fit_inference_curves(std::span<const MeasurementRecord> records,
                              std::span<const PhaseFootprint> footprints);

}  // namespace kdlca
