// SPDX-License-Identifier: Apache-2.0
#include "kdlca/sensitivity.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "kdlca/error.hpp"

namespace kdlca {

std::string_view to_string(SweepParameter parameter) noexcept {
  switch (parameter) {
    case SweepParameter::GridIntensity: return "grid_intensity";
    case SweepParameter::PUE: return "pue";
    case SweepParameter::AUR: return "aur";
    case SweepParameter::LifetimeHours: return "lifetime_hours";
    case SweepParameter::ManufacturingFootprint: return "manufacturing_footprint";
  }
  return "grid_intensity";
}

SweepParameter parse_sweep_parameter(std::string_view text) {
  if (text == "grid_intensity" || text == "egm") return SweepParameter::GridIntensity;
  if (text == "pue") return SweepParameter::PUE;
  if (text == "aur") return SweepParameter::AUR;
  if (text == "lifetime_hours" || text == "lifetime") return SweepParameter::LifetimeHours;
  if (text == "manufacturing_footprint" || text == "manufacturing") {
    return SweepParameter::ManufacturingFootprint;
  }
  throw Error(ErrorCode::ParseError, fmt::format("unknown sweep parameter '{}'", text));
}

void validate_range(const ParamRange& range) {
  const auto fail = [&](std::string_view why) {
    throw Error(ErrorCode::RangeViolatesDomain,
                fmt::format("range for {} [{}, {}, {}]: {}", to_string(range.parameter), range.low,
                            range.baseline, range.high, why));
  };
  if (!(range.low <= range.baseline && range.baseline <= range.high)) {
    fail("expected low <= baseline <= high");
  }
  switch (range.parameter) {
    case SweepParameter::GridIntensity:
    case SweepParameter::ManufacturingFootprint:
      if (range.low < 0.0) fail("values must be nonnegative");
      break;
    case SweepParameter::PUE:
      if (range.low < 1.0) fail("PUE must be >= 1");
      break;
    case SweepParameter::AUR:
      if (!(range.low > 0.0) || range.high > 1.0) fail("AUR must lie in (0, 1]");
      break;
    case SweepParameter::LifetimeHours:
      if (!(range.low > 0.0)) fail("lifetime must be positive");
      break;
  }
}

std::vector<ParamRange> illustrative_ranges() {
  return {
      {SweepParameter::GridIntensity, 0.02, 0.5, 0.033},
      {SweepParameter::PUE, 1.1, 1.6, 1.24},
      {SweepParameter::AUR, 0.2, 1.0, 0.8},
      {SweepParameter::LifetimeHours, years_to_hours(3.0), years_to_hours(7.0),
       years_to_hours(5.0)},
      {SweepParameter::ManufacturingFootprint, 100.0, 300.0, 150.0},
  };
}

std::pair<EmissionParams, DeviceCatalog> with_parameter(const EmissionParams& params,
                                                        const DeviceCatalog& devices,
                                                        SweepParameter parameter, double value) {
  EmissionParams p = params;
  DeviceCatalog d = devices;
  switch (parameter) {
    case SweepParameter::GridIntensity: p.grid_kgco2e_per_kwh = value; break;
    case SweepParameter::PUE: p.pue = value; break;
    case SweepParameter::AUR:
      p.aur_by_phase[Phase::TeacherTrain] = value;
      p.aur_by_phase[Phase::Distill] = value;
      break;
    case SweepParameter::LifetimeHours: p.lifetime_override_hours = value; break;
    case SweepParameter::ManufacturingFootprint:
      for (auto& [id, device] : d) device.manufacturing_footprint_kgco2e = value;
      break;
  }
  return {std::move(p), std::move(d)};
}

namespace {

std::map<std::string, ProductionBreakdown> evaluate(const LifeCycleInventory& inventory,
                                                    const EmissionParams& params,
                                                    SweepParameter parameter, double value) {
  auto [p, devices] = with_parameter(params, inventory.devices, parameter, value);
  LifeCycleInventory shifted = inventory;
  shifted.devices = std::move(devices);
  return production_breakdowns(shifted, p);
}

ComponentDelta component_delta(const ProductionBreakdown& at, const ProductionBreakdown& base) {
  return {at.operational_kgco2e - base.operational_kgco2e,
          at.embodied_kgco2e - base.embodied_kgco2e};
}

}  // namespace

std::vector<SensitivityRow> one_way_sweep(const LifeCycleInventory& inventory,
                                          const EmissionParams& base_params,
                                          std::span<const ParamRange> ranges) {
  for (const auto& range : ranges) validate_range(range);
  std::vector<SensitivityRow> rows;
  for (const auto& range : ranges) {
    const auto base = evaluate(inventory, base_params, range.parameter, range.baseline);
    const auto low = evaluate(inventory, base_params, range.parameter, range.low);
    const auto high = evaluate(inventory, base_params, range.parameter, range.high);
    for (const auto& spec : inventory.systems) {
      const auto& b = base.at(spec.name);
      SensitivityRow row;
      row.system_name = spec.name;
      row.range = range;
      row.baseline_kgco2e = b.total();
      row.delta_low_kgco2e = low.at(spec.name).total() - b.total();
      row.delta_high_kgco2e = high.at(spec.name).total() - b.total();
      row.low_components = component_delta(low.at(spec.name), b);
      row.high_components = component_delta(high.at(spec.name), b);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

bool OrderingReport::stable() const noexcept {
  return std::all_of(entries.begin(), entries.end(),
                     [](const OrderingEntry& e) { return e.matches_baseline; });
}

namespace {

std::vector<std::string> rank(const std::map<std::string, double>& totals) {
  std::vector<std::pair<double, std::string>> order;
  for (const auto& [name, value] : totals) order.emplace_back(value, name);
  std::sort(order.begin(), order.end());
  std::vector<std::string> out;
  for (auto& [value, name] : order) out.push_back(std::move(name));
  return out;
}

}  // namespace

OrderingReport ordering_report(std::span<const SensitivityRow> rows,
                               const std::map<std::string, double>& baseline_totals) {
  OrderingReport report;
  report.baseline_order = rank(baseline_totals);

  std::vector<std::pair<SweepParameter, ParamRange>> sweeps;
  for (const auto& row : rows) {
    const bool seen = std::any_of(sweeps.begin(), sweeps.end(), [&](const auto& s) {
      return s.first == row.range.parameter && s.second.low == row.range.low &&
             s.second.high == row.range.high;
    });
    if (!seen) sweeps.emplace_back(row.range.parameter, row.range);
  }
  for (const auto& [parameter, range] : sweeps) {
    for (const Extreme extreme : {Extreme::Low, Extreme::High}) {
      std::map<std::string, double> totals = baseline_totals;
      for (const auto& row : rows) {
        if (row.range.parameter != parameter || row.range.low != range.low ||
            row.range.high != range.high) {
          continue;
        }
        const auto it = totals.find(row.system_name);
        if (it == totals.end()) continue;
        it->second = row.baseline_kgco2e +
                     (extreme == Extreme::Low ? row.delta_low_kgco2e : row.delta_high_kgco2e);
      }
      OrderingEntry entry;
      entry.parameter = parameter;
      entry.extreme = extreme;
      entry.value = extreme == Extreme::Low ? range.low : range.high;
      entry.order = rank(totals);
      entry.matches_baseline = entry.order == report.baseline_order;
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

}  // namespace kdlca
