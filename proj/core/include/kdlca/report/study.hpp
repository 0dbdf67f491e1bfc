// SPDX-License-Identifier: Apache-2.0
//
// Input documents for the report commands. config.json and ranges.json carry
// "schema_version": 1.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kdlca/accounting.hpp"
#include "kdlca/bootstrap.hpp"
#include "kdlca/report/csv.hpp"
#include "kdlca/sensitivity.hpp"

namespace kdlca::report {

struct FunctionalUnit {
  std::uint64_t volume_tokens = 0;
  std::string horizon_label = "1 year";
};

struct BootstrapSettings {
  std::size_t n = kDefaultResamples;
  double level = kDefaultConfidenceLevel;
  std::uint64_t seed = 0;
};

struct ProjectConfig {
  EmissionParams params;
  std::vector<Device> devices;
  AllocationPolicy allocation;
  FunctionalUnit functional_unit;
  std::optional<double> target_quality;
  BootstrapSettings bootstrap;
  /// Every system named in records must be declared here.
  std::vector<SystemSpec> systems;
};

ProjectConfig parse_config(const nlohmann::json& doc);
ProjectConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ProjectConfig& config);

/// {"schema_version": 1, "ranges": [{"parameter", "low", "high", "baseline"}]}
std::vector<ParamRange> parse_ranges(const nlohmann::json& doc);
std::vector<ParamRange> load_ranges(const std::filesystem::path& path);

struct Study {
  ProjectConfig config;
  LifeCycleInventory inventory;
  std::optional<ScoreTable> scores;
};

/// Throws UnknownSystem or UnknownDevice when records do not match the config.
Study make_study(ProjectConfig config, std::vector<MeasurementRecord> records,
                 std::optional<ScoreTable> scores = std::nullopt);

Study load_study(const std::filesystem::path& config_path,
                 const std::filesystem::path& records_path,
                 const std::optional<std::filesystem::path>& scores_path = std::nullopt);

struct ProfileOptions {
  bool require_scores = false;
};

/// Profiles in declaration order. Throws MissingInferenceData for a system with
/// neither an inference cost override nor token-counted inference records.
std::vector<SystemProfile> build_profiles(const Study& study, const EmissionParams& params,
                                          ProfileOptions options = {});

}  // namespace kdlca::report
