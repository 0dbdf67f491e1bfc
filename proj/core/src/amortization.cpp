// SPDX-License-Identifier: Apache-2.0
#include "kdlca/amortization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "kdlca/error.hpp"

namespace kdlca {

std::string_view to_string(BreakEvenRelation relation) noexcept {
  switch (relation) {
    case BreakEvenRelation::CrossesAt: return "crosses_at";
    case BreakEvenRelation::ADominates: return "a_dominates";
    case BreakEvenRelation::BDominates: return "b_dominates";
    case BreakEvenRelation::Identical: return "identical";
  }
  return "identical";
}

BreakEvenResult break_even(const SystemProfile& a, const SystemProfile& b) {
  BreakEvenResult out{a.name, b.name, std::nullopt, BreakEvenRelation::Identical};
  const double intercept_gap = a.production_footprint_kgco2e - b.production_footprint_kgco2e;
  const double slope_gap = b.infer_cost_kgco2e_per_token - a.infer_cost_kgco2e_per_token;

  if (slope_gap == 0.0) {
    if (intercept_gap == 0.0) return out;
    out.relation = intercept_gap < 0.0 ? BreakEvenRelation::ADominates
                                       : BreakEvenRelation::BDominates;
    return out;
  }
  const double crossing = intercept_gap / slope_gap;
  if (crossing >= 0.0) {
    out.relation = BreakEvenRelation::CrossesAt;
    out.breakeven_tokens = crossing == 0.0 ? 0.0 : crossing;  // drop -0.0
    return out;
  }
  // The lines meet at negative X, so whichever is lower at X = 0 stays lower.
  out.relation = intercept_gap < 0.0 ? BreakEvenRelation::ADominates
                                     : BreakEvenRelation::BDominates;
  return out;
}

namespace {

void score(LinearCostModel& model, std::span<const CostPoint> points) {
  model.fit_sse = 0.0;
  model.fit_abs_error = 0.0;
  for (const auto& p : points) {
    const double r = p.footprint_kgco2e - model.predict(p.tokens);
    model.fit_sse += r * r;
    model.fit_abs_error += std::fabs(r);
  }
}

// Centered OLS, skipping index `skip` when set. Empty when x has no spread.
std::optional<std::pair<double, double>> ols_excluding(std::span<const CostPoint> points,
                                                       std::optional<std::size_t> skip) {
  double n = 0.0, mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (skip && *skip == i) continue;
    n += 1.0;
    mean_x += points[i].tokens;
    mean_y += points[i].footprint_kgco2e;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (skip && *skip == i) continue;
    const double dx = points[i].tokens - mean_x;
    sxx += dx * dx;
    sxy += dx * (points[i].footprint_kgco2e - mean_y);
  }
  if (sxx == 0.0) return std::nullopt;
  const double slope = sxy / sxx;
  return std::pair{mean_y - slope * mean_x, slope};
}

}  // namespace

LinearCostModel ols_fit(std::span<const CostPoint> points) {
  if (points.size() < 2) throw Error(ErrorCode::TooFewPoints, "OLS needs at least two points");
  const auto fit = ols_excluding(points, std::nullopt);
  if (!fit) throw Error(ErrorCode::DegenerateFit, "all token values are identical");
  LinearCostModel model;
  model.intercept_kgco2e = fit->first;
  model.slope_kgco2e_per_token = fit->second;
  score(model, points);
  model.candidates_evaluated = 1;
  return model;
}

std::vector<LinearCostModel> loo_candidates(std::span<const CostPoint> points) {
  if (points.size() < 3) {
    throw Error(ErrorCode::TooFewPoints,
                fmt::format("leave-one-out fit needs at least 3 points, got {}", points.size()));
  }
  std::vector<LinearCostModel> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto fit = ols_excluding(points, i);
    if (!fit) continue;
    LinearCostModel model;
    model.intercept_kgco2e = fit->first;
    model.slope_kgco2e_per_token = fit->second;
    score(model, points);
    model.excluded_point_index = i;
    model.candidates_evaluated = points.size();
    out.push_back(model);
  }
  return out;
}

LinearCostModel loo_robust_fit(std::span<const CostPoint> points, LooCriterion criterion) {
  const auto candidates = loo_candidates(points);
  if (candidates.empty()) {
    throw Error(ErrorCode::DegenerateFit, "no leave-one-out subset has distinct token values");
  }
  // min_element keeps the first minimum, i.e. the lowest excluded index on ties.
  return *std::min_element(candidates.begin(), candidates.end(),
                           [criterion](const LinearCostModel& l, const LinearCostModel& r) {
                             return criterion == LooCriterion::SquaredError
                                        ? l.fit_sse < r.fit_sse
                                        : l.fit_abs_error < r.fit_abs_error;
                           });
}

std::vector<ScalingRow> scaling_table(std::span<const SystemProfile> profiles,
                                      const FitTable& fits, const SystemProfile& teacher) {
  for (const auto& [key, model] : fits) {
    if (!model.accepted()) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("fit for '{}' at batch {} has a negative slope", key.first,
                              key.second));
    }
  }
  std::vector<ScalingRow> rows;
  for (const auto& profile : profiles) {
    if (profile.name == teacher.name) continue;
    ScalingRow row{profile.name, {}};
    for (auto it = fits.lower_bound({profile.name, 0});
         it != fits.end() && it->first.first == profile.name; ++it) {
      const std::uint32_t batch = it->first.second;
      const auto teacher_fit = fits.find({teacher.name, batch});
      if (teacher_fit == fits.end()) {
        throw Error(ErrorCode::MissingTeacherFit,
                    fmt::format("no teacher fit at batch size {}", batch));
      }
      SystemProfile student_line = profile;
      student_line.infer_cost_kgco2e_per_token = it->second.slope_kgco2e_per_token;
      SystemProfile teacher_line = teacher;
      teacher_line.infer_cost_kgco2e_per_token = teacher_fit->second.slope_kgco2e_per_token;
      row.cells.push_back({batch, break_even(student_line, teacher_line)});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

FitTable fit_inference_curves(std::span<const MeasurementRecord> records,
                              std::span<const PhaseFootprint> footprints) {
  if (records.size() != footprints.size()) {
    throw Error(ErrorCode::LengthMismatch, "one footprint per record is required");
  }
  std::map<FitKey, std::vector<CostPoint>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.phase != Phase::Infer || !r.tokens_processed || !r.batch_size) continue;
    groups[{r.system, *r.batch_size}].push_back(
        {static_cast<double>(*r.tokens_processed), footprints[i].total()});
  }
  FitTable out;
  for (const auto& [key, points] : groups) {
    if (points.size() < 3) continue;
    std::set<double> distinct;
    for (const auto& p : points) distinct.insert(p.tokens);
    if (distinct.size() < 2) continue;
    out.emplace(key, loo_robust_fit(points));
  }
  return out;
}

}  // namespace kdlca
