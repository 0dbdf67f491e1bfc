// SPDX-License-Identifier: Apache-2.0
#include "helpers.hpp"
#include <map>
#include <stdexcept>

#include "kdlca/sensitivity.hpp"

using namespace kdlca;
using testutil::record;

namespace {

LifeCycleInventory fixture(double scale_b = 2.0) {
  LifeCycleInventory inv;
  inv.devices = {{"gpu", reference_gpu("gpu")}};
  inv.systems = {{"a", SystemRole::Teacher, {}, {}, {}, "a", {}},
                 {"b", SystemRole::NoKD, {}, {}, {}, "b", {}}};
  inv.records = {record("a", Phase::TeacherTrain, 100, 50),
                 record("b", Phase::TeacherTrain, 100 * scale_b, 50 * scale_b)};
  return inv;
}

const SensitivityRow& row_for(const std::vector<SensitivityRow>& rows, std::string_view system) {
  for (const auto& r : rows) {
    if (r.system_name == system) return r;
  }
  throw std::runtime_error("missing row");
}

}  // namespace

TEST(Sensitivity, DegenerateRangesGiveZeroDeltas) {
  const auto params = EmissionParams::reference_datacenter();
  std::vector<ParamRange> ranges;
  for (auto r : illustrative_ranges()) {
    r.low = r.high = r.baseline;
    ranges.push_back(r);
  }
  for (const auto& row : one_way_sweep(fixture(), params, ranges)) {
    EXPECT_EQ(row.delta_low_kgco2e, 0.0);
    EXPECT_EQ(row.delta_high_kgco2e, 0.0);
  }
}

TEST(Sensitivity, GridSweepTouchesOnlyOperational) {
  const auto params = EmissionParams::reference_datacenter();
  const std::vector<ParamRange> ranges{{SweepParameter::GridIntensity, 0.0, 0.066, 0.033}};
  const auto rows = one_way_sweep(fixture(), params, ranges);
  const auto base = build_ledgers(fixture(), params);
  for (const auto& row : rows) {
    const double op = base.at(row.system_name).operational_total();
    EXPECT_NEAR(row.delta_low_kgco2e, -op, 1e-12 * op);
    EXPECT_NEAR(row.delta_high_kgco2e, op, 1e-12 * op);
    EXPECT_EQ(row.low_components.embodied_kgco2e, 0.0);
    EXPECT_EQ(row.high_components.embodied_kgco2e, 0.0);
  }
}

TEST(Sensitivity, ComponentSeparation) {
  const auto params = EmissionParams::reference_datacenter();
  const auto rows = one_way_sweep(fixture(), params, illustrative_ranges());
  for (const auto& row : rows) {
    const bool operational = row.range.parameter == SweepParameter::GridIntensity ||
                             row.range.parameter == SweepParameter::PUE;
    for (const auto& c : {row.low_components, row.high_components}) {
      if (operational) {
        EXPECT_EQ(c.embodied_kgco2e, 0.0) << to_string(row.range.parameter);
      } else {
        EXPECT_EQ(c.operational_kgco2e, 0.0) << to_string(row.range.parameter);
      }
    }
    EXPECT_NEAR(row.delta_low_kgco2e,
                row.low_components.operational_kgco2e + row.low_components.embodied_kgco2e, 1e-12);
  }
}

TEST(Sensitivity, ManufacturingIsLinear) {
  const auto params = EmissionParams::reference_datacenter();
  const std::vector<ParamRange> ranges{{SweepParameter::ManufacturingFootprint, 0.0, 300.0, 150.0}};
  const auto rows = one_way_sweep(fixture(), params, ranges);
  const auto& a = row_for(rows, "a");
  EXPECT_NEAR(a.delta_high_kgco2e, -a.delta_low_kgco2e, 1e-12);
  EXPECT_NEAR(a.delta_high_kgco2e, 150.0 * 50 / (43800 * 0.8), 1e-12);
}

TEST(Sensitivity, LifetimeSweepUsesOverride) {
  const auto params = EmissionParams::reference_datacenter();
  const std::vector<ParamRange> ranges{
      {SweepParameter::LifetimeHours, 21900.0, 87600.0, 43800.0}};
  const auto& a = row_for(one_way_sweep(fixture(), params, ranges), "a");
  const double emb = 150.0 * 50 / (43800 * 0.8);
  EXPECT_NEAR(a.delta_low_kgco2e, emb, 1e-12);
  EXPECT_NEAR(a.delta_high_kgco2e, -emb / 2, 1e-12);
}

TEST(Sensitivity, RangeValidation) {
  EXPECT_KDLCA_ERROR(validate_range({SweepParameter::PUE, 0.9, 1.5, 1.2}), ErrorCode::RangeViolatesDomain);
  EXPECT_KDLCA_ERROR(validate_range({SweepParameter::AUR, 0.2, 1.2, 0.8}), ErrorCode::RangeViolatesDomain);
  EXPECT_KDLCA_ERROR(validate_range({SweepParameter::GridIntensity, 0.1, 0.5, 0.05}),
                     ErrorCode::RangeViolatesDomain);
  EXPECT_KDLCA_ERROR(validate_range({SweepParameter::LifetimeHours, 0.0, 10.0, 5.0}),
                     ErrorCode::RangeViolatesDomain);
  for (const auto& r : illustrative_ranges()) EXPECT_NO_THROW(validate_range(r));
}

TEST(Sensitivity, CommonScalingKeepsOrdering) {
  const auto params = EmissionParams::reference_datacenter();
  const auto inv = fixture();
  const auto rows = one_way_sweep(inv, params, illustrative_ranges());
  std::map<std::string, double> totals;
  for (const auto& [name, b] : production_breakdowns(inv, params)) totals[name] = b.total();
  const auto report = ordering_report(rows, totals);
  EXPECT_EQ(report.baseline_order, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(report.entries.size(), 2 * illustrative_ranges().size());
  EXPECT_TRUE(report.stable());
}

TEST(Sensitivity, OrderingDetectsSwap) {
  // b uses more energy but less runtime, so a cleaner grid favours it.
  LifeCycleInventory inv = fixture();
  inv.records[1] = record("b", Phase::TeacherTrain, 1000, 1);
  const auto params = EmissionParams::reference_datacenter();
  const std::vector<ParamRange> ranges{{SweepParameter::GridIntensity, 0.0, 0.5, 0.033}};
  std::map<std::string, double> totals;
  for (const auto& [name, b] : production_breakdowns(inv, params)) totals[name] = b.total();
  const auto report = ordering_report(one_way_sweep(inv, params, ranges), totals);
  EXPECT_FALSE(report.stable());
}

TEST(Sensitivity, ParameterNames) {
  EXPECT_EQ(parse_sweep_parameter("egm"), SweepParameter::GridIntensity);
  EXPECT_EQ(parse_sweep_parameter("lifetime"), SweepParameter::LifetimeHours);
  EXPECT_EQ(parse_sweep_parameter(to_string(SweepParameter::AUR)), SweepParameter::AUR);
}
