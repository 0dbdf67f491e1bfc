// SPDX-License-Identifier: Apache-2.0
//
// One-way sensitivity of production footprints: each sweep moves exactly one
// emission parameter to its low or high value and keeps the rest at baseline.
#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "kdlca/accounting.hpp"

namespace kdlca {

enum class SweepParameter { GridIntensity, PUE, AUR, LifetimeHours, ManufacturingFootprint };

std::string_view to_string(SweepParameter parameter) noexcept;
SweepParameter parse_sweep_parameter(std::string_view text);

struct ParamRange {
  SweepParameter parameter = SweepParameter::GridIntensity;
  double low = 0.0;
  double high = 0.0;
  double baseline = 0.0;
};

/// Throws RangeViolatesDomain unless low <= baseline <= high and every value
/// is admissible for the parameter.
void validate_range(const ParamRange& range);

/// Placeholder ranges around the reference data-center values; not measured.
std::vector<ParamRange> illustrative_ranges();

struct ComponentDelta {
  double operational_kgco2e = 0.0;
  double embodied_kgco2e = 0.0;
};

struct SensitivityRow {
  std::string system_name;
  ParamRange range;
  double baseline_kgco2e = 0.0;  ///< parameter at range.baseline
  double delta_low_kgco2e = 0.0;
  double delta_high_kgco2e = 0.0;
  ComponentDelta low_components;
  ComponentDelta high_components;
};

/// Parameter set and device catalog with one parameter replaced. AUR sweeps
/// set the training and distillation rates; lifetime sweeps set the override;
/// manufacturing sweeps set every device's footprint.
std::pair<EmissionParams, DeviceCatalog> with_parameter(const EmissionParams& params,
                                                        const DeviceCatalog& devices,
                                                        SweepParameter parameter, double value);

std::vector<SensitivityRow> one_way_sweep(const LifeCycleInventory& inventory,
                                          const EmissionParams& base_params,
                                          std::span<const ParamRange> ranges);

enum class Extreme { Low, High };

struct OrderingEntry {
  SweepParameter parameter = SweepParameter::GridIntensity;
  Extreme extreme = Extreme::Low;
  double value = 0.0;
  std::vector<std::string> order;  ///< ascending production footprint
  bool matches_baseline = true;
};

struct OrderingReport {
  std::vector<std::string> baseline_order;
  std::vector<OrderingEntry> entries;

  [[nodiscard]] bool stable() const noexcept;
};

/// Ranks systems at every parameter extreme (the row baseline plus its delta)
/// against the ranking of `baseline_totals`. Ties rank by name.
OrderingReport ordering_report(std::span<const SensitivityRow> rows,
                               const std::map<std::string, double>& baseline_totals);

}  // namespace kdlca
