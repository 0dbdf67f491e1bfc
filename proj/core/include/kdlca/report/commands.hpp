// SPDX-License-Identifier: Apache-2.0
//
// Report builders behind the kdlca subcommands. Each builder validates its
// inputs and computes a report value; rendering to table, JSON and SVG is
// separate so the values can be checked directly.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kdlca/amortization.hpp"
#include "kdlca/frontier.hpp"
#include "kdlca/kd/simulate.hpp"
#include "kdlca/report/study.hpp"
#include "kdlca/sensitivity.hpp"

namespace kdlca::report {

enum class OutputFormat { Table, Json, Svg, All };

OutputFormat parse_output_format(std::string_view text);

/// Rendered forms of one report. `stem` names the files: <stem>.json, <stem>.svg.
struct Rendered {
  std::string stem;
  std::string table;
  nlohmann::json json;
  std::string svg;
};

/// Files written verbatim whatever the output format.
struct ExtraFile {
  std::string filename;
  std::string content;
};

/// Writes every file to a temporary name first and renames only after all
/// writes succeed; a failed rename removes the files already moved. Returns
/// the final paths.
std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& out_dir,
                                                 const Rendered& rendered, OutputFormat format,
                                                 const std::vector<ExtraFile>& extra = {});

// footprint ----------------------------------------------------------------

struct FootprintRow {
  std::string system;
  SystemRole role = SystemRole::NoKD;
  std::optional<std::string> kd_method;
  std::optional<double> mean_quality;
  double teacher_training_kgco2e = 0.0;
  double model_training_kgco2e = 0.0;
  double distillation_kgco2e = 0.0;
  double inference_kgco2e = 0.0;  ///< at the report volume

  [[nodiscard]] double one_time_kgco2e() const noexcept {
    return teacher_training_kgco2e + model_training_kgco2e + distillation_kgco2e;
  }
  [[nodiscard]] double total_kgco2e() const noexcept { return one_time_kgco2e() + inference_kgco2e; }
};

struct FootprintReport {
  std::uint64_t volume_tokens = 0;
  std::string horizon_label;
  /// Teacher first, then the rest by mean quality (descending) when scores exist.
  std::vector<FootprintRow> rows;
};

FootprintReport footprint_report(const Study& study, std::uint64_t volume_tokens);
Rendered render(const FootprintReport& report);

// breakeven ----------------------------------------------------------------

enum class Against { Teacher, NoKD };

Against parse_against(std::string_view text);

struct BreakevenRow {
  std::string system;
  SystemRole role = SystemRole::NoKD;
  double production_kgco2e = 0.0;
  double infer_cost_kgco2e_per_token = 0.0;
  BreakEvenResult result;  ///< system_a = this row, system_b = reference
};

struct BreakevenReport {
  Against against = Against::Teacher;
  std::string reference;
  double reference_production_kgco2e = 0.0;
  double reference_infer_cost_kgco2e_per_token = 0.0;
  std::uint64_t volume_tokens = 0;
  std::vector<BreakevenRow> rows;
  /// Per-batch-size break-even against the teacher, present when every
  /// batch size measured for a student was also measured for the teacher.
  std::vector<ScalingRow> scaling;
  FitTable fits;
};

BreakevenReport breakeven_report(const Study& study, Against against, std::uint64_t volume_tokens);
Rendered render(const BreakevenReport& report);

// pareto -------------------------------------------------------------------

struct ParetoReport {
  std::vector<FrontierPoint> points;  ///< non-teacher systems, frontier flags set
  std::vector<std::string> dropped_checkpoints;
  std::optional<FrontierPoint> teacher;
  BootstrapSettings bootstrap;
};

ParetoReport pareto_report(const Study& study);
Rendered render(const ParetoReport& report);

// recommend ----------------------------------------------------------------

struct RecommendReport {
  double target_quality = 0.0;
  std::uint64_t volume_tokens = 0;
  Recommendation recommendation;
};

/// Throws Usage when the config has no target_quality.
RecommendReport recommend_report(const Study& study, std::uint64_t volume_tokens);
Rendered render(const RecommendReport& report);

// sensitivity --------------------------------------------------------------

struct SensitivityReport {
  std::vector<SensitivityRow> rows;
  std::map<std::string, double> baseline_totals;  ///< production footprint at config params
  OrderingReport ordering;
};

SensitivityReport sensitivity_report(const Study& study, std::span<const ParamRange> ranges);
Rendered render(const SensitivityReport& report);

// simulate -----------------------------------------------------------------

struct SimulateReport {
  kd::KdPlan plan;
  kd::SimulationResult result;
};

SimulateReport simulate_report(const kd::KdPlan& plan);
kd::KdPlan load_plan(const std::filesystem::path& path);
Rendered render(const SimulateReport& report);
/// records.csv for the simulated trace.
std::string records_csv(const SimulateReport& report);

}  // namespace kdlca::report
