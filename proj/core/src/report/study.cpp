// SPDX-License-Identifier: Apache-2.0
#include "kdlca/report/study.hpp"

#include <fmt/format.h>

#include "../json_util.hpp"
#include "kdlca/error.hpp"

namespace kdlca::report {

using detail::field_or;
using detail::optional_field;
using detail::parse_fail;
using detail::required_field;
using nlohmann::json;

namespace {

const json& require_object(const json& doc, std::string_view key, std::string_view path) {
  const auto it = doc.find(key);
  if (it == doc.end() || !it->is_object()) {
    parse_fail(fmt::format("{}.{}", path, key), "expected an object");
  }
  return *it;
}

EmissionParams parse_params(const json& doc) {
  EmissionParams params;
  params.pue = required_field<double>(doc, "pue", "config.params");
  params.grid_kgco2e_per_kwh = required_field<double>(doc, "grid_kgco2e_per_kwh", "config.params");
  const json& aur = require_object(doc, "aur_by_phase", "config.params");
  for (const auto& [key, value] : aur.items()) {
    const std::string path = fmt::format("config.params.aur_by_phase.{}", key);
    if (!value.is_number()) parse_fail(path, "expected a number");
    Phase phase{};
    try {
      phase = parse_phase(key);
    } catch (const Error& e) {
      parse_fail(path, e.what());
    }
    params.aur_by_phase[phase] = value.get<double>();
  }
  params.lifetime_override_hours =
      optional_field<double>(doc, "lifetime_override_hours", "config.params");
  validate_params(params);
  return params;
}

AllocationPolicy parse_allocation(const json& doc) {
  const auto kind = required_field<std::string>(doc, "kind", "config.allocation");
  if (kind == "full") return AllocationPolicy::full();
  if (kind == "sunk") return AllocationPolicy::sunk();
  if (kind == "shared") {
    return AllocationPolicy::shared(required_field<std::uint32_t>(doc, "k", "config.allocation"));
  }
  parse_fail("config.allocation.kind", fmt::format("unknown allocation '{}'", kind));
}

json allocation_json(const AllocationPolicy& policy) {
  switch (policy.kind) {
    case AllocationPolicy::Kind::FullAllocation:
      return {{"kind", "full"}};
    case AllocationPolicy::Kind::SharedAcrossK:
      return {{"kind", "shared"}, {"k", policy.k}};
    case AllocationPolicy::Kind::SunkTeacher:
      return {{"kind", "sunk"}};
  }
  return {};
}

SystemSpec parse_system(const json& doc, std::size_t index) {
  const std::string path = fmt::format("config.systems[{}]", index);
  if (!doc.is_object()) parse_fail(path, "expected an object");
  SystemSpec spec;
  spec.name = required_field<std::string>(doc, "name", path);
  const auto role = required_field<std::string>(doc, "role", path);
  try {
    spec.role = parse_role(role);
  } catch (const Error& e) {
    parse_fail(path + ".role", e.what());
  }
  spec.kd_method = optional_field<std::string>(doc, "kd_method", path);
  spec.student_params_millions = optional_field<double>(doc, "student_params_millions", path);
  spec.teacher = optional_field<std::string>(doc, "teacher", path);
  spec.group = field_or<std::string>(doc, "group", path, spec.name);
  spec.infer_cost_kgco2e_per_token =
      optional_field<double>(doc, "infer_cost_kgco2e_per_token", path);
  if (spec.infer_cost_kgco2e_per_token && *spec.infer_cost_kgco2e_per_token < 0.0) {
    throw Error(ErrorCode::NegativeValue,
                fmt::format("{}.infer_cost_kgco2e_per_token must be nonnegative", path));
  }
  return spec;
}

}  // namespace

ProjectConfig parse_config(const json& doc) {
  detail::require_schema_version(doc, "config");
  ProjectConfig config;
  config.params = parse_params(require_object(doc, "params", "config"));

  const auto devices = doc.find("devices");
  if (devices == doc.end() || !devices->is_array() || devices->empty()) {
    parse_fail("config.devices", "expected a nonempty array");
  }
  for (std::size_t i = 0; i < devices->size(); ++i) {
    const std::string path = fmt::format("config.devices[{}]", i);
    const json& d = (*devices)[i];
    if (!d.is_object()) parse_fail(path, "expected an object");
    Device device;
    device.id = required_field<std::string>(d, "id", path);
    device.manufacturing_footprint_kgco2e =
        required_field<double>(d, "manufacturing_footprint_kgco2e", path);
    device.lifetime_hours = field_or<double>(d, "lifetime_hours", path, kDefaultLifetimeHours);
    validate_device(device);
    config.devices.push_back(std::move(device));
  }

  if (doc.contains("allocation")) {
    config.allocation = parse_allocation(require_object(doc, "allocation", "config"));
  }
  const json& unit = require_object(doc, "functional_unit", "config");
  config.functional_unit.volume_tokens =
      required_field<std::uint64_t>(unit, "volume_tokens", "config.functional_unit");
  config.functional_unit.horizon_label = field_or<std::string>(
      unit, "horizon_label", "config.functional_unit", config.functional_unit.horizon_label);
  config.target_quality = optional_field<double>(doc, "target_quality", "config");

  if (doc.contains("bootstrap")) {
    const json& b = require_object(doc, "bootstrap", "config");
    config.bootstrap.n = field_or<std::size_t>(b, "n", "config.bootstrap", config.bootstrap.n);
    config.bootstrap.level =
        field_or<double>(b, "level", "config.bootstrap", config.bootstrap.level);
    config.bootstrap.seed =
        field_or<std::uint64_t>(b, "seed", "config.bootstrap", config.bootstrap.seed);
    if (config.bootstrap.n == 0) parse_fail("config.bootstrap.n", "must be positive");
    if (!(config.bootstrap.level > 0.0 && config.bootstrap.level < 1.0)) {
      parse_fail("config.bootstrap.level", "must lie in (0, 1)");
    }
  }

  const auto systems = doc.find("systems");
  if (systems == doc.end() || !systems->is_array()) {
    parse_fail("config.systems", "expected an array");
  }
  for (std::size_t i = 0; i < systems->size(); ++i) {
    config.systems.push_back(parse_system((*systems)[i], i));
  }
  return config;
}

ProjectConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, fmt::format("{}: {}", path.filename().string(), e.what()));
  }
  return parse_config(doc);
}

json to_json(const ProjectConfig& config) {
  json aur = json::object();
  for (const auto& [phase, value] : config.params.aur_by_phase) {
    aur[std::string(to_string(phase))] = value;
  }
  json params = {{"pue", config.params.pue},
                 {"grid_kgco2e_per_kwh", config.params.grid_kgco2e_per_kwh},
                 {"aur_by_phase", aur}};
  if (config.params.lifetime_override_hours) {
    params["lifetime_override_hours"] = *config.params.lifetime_override_hours;
  }
  json devices = json::array();
  for (const auto& d : config.devices) {
    devices.push_back({{"id", d.id},
                       {"manufacturing_footprint_kgco2e", d.manufacturing_footprint_kgco2e},
                       {"lifetime_hours", d.lifetime_hours}});
  }
  json systems = json::array();
  for (const auto& s : config.systems) {
    json entry = {{"name", s.name}, {"role", to_string(s.role)}, {"group", s.group}};
    if (s.kd_method) entry["kd_method"] = *s.kd_method;
    if (s.student_params_millions) entry["student_params_millions"] = *s.student_params_millions;
    if (s.teacher) entry["teacher"] = *s.teacher;
    if (s.infer_cost_kgco2e_per_token) {
      entry["infer_cost_kgco2e_per_token"] = *s.infer_cost_kgco2e_per_token;
    }
    systems.push_back(std::move(entry));
  }
  json out = {{"schema_version", detail::kSchemaVersion},
              {"params", params},
              {"devices", devices},
              {"allocation", allocation_json(config.allocation)},
              {"functional_unit",
               {{"volume_tokens", config.functional_unit.volume_tokens},
                {"horizon_label", config.functional_unit.horizon_label}}},
              {"bootstrap",
               {{"n", config.bootstrap.n},
                {"level", config.bootstrap.level},
                {"seed", config.bootstrap.seed}}},
              {"systems", systems}};
  if (config.target_quality) out["target_quality"] = *config.target_quality;
  return out;
}

std::vector<ParamRange> parse_ranges(const json& doc) {
  detail::require_schema_version(doc, "ranges");
  const auto ranges = doc.find("ranges");
  if (ranges == doc.end() || !ranges->is_array()) parse_fail("ranges.ranges", "expected an array");
  std::vector<ParamRange> out;
  for (std::size_t i = 0; i < ranges->size(); ++i) {
    const std::string path = fmt::format("ranges.ranges[{}]", i);
    const json& r = (*ranges)[i];
    if (!r.is_object()) parse_fail(path, "expected an object");
    ParamRange range;
    const auto name = required_field<std::string>(r, "parameter", path);
    try {
      range.parameter = parse_sweep_parameter(name);
    } catch (const Error& e) {
      parse_fail(path + ".parameter", e.what());
    }
    range.low = required_field<double>(r, "low", path);
    range.high = required_field<double>(r, "high", path);
    range.baseline = required_field<double>(r, "baseline", path);
    validate_range(range);
    out.push_back(range);
  }
  return out;
}

std::vector<ParamRange> load_ranges(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, fmt::format("{}: {}", path.filename().string(), e.what()));
  }
  return parse_ranges(doc);
}

Study make_study(ProjectConfig config, std::vector<MeasurementRecord> records,
                 std::optional<ScoreTable> scores) {
  Study study;
  study.inventory.systems = config.systems;
  study.inventory.records = std::move(records);
  for (const auto& device : config.devices) {
    if (!study.inventory.devices.emplace(device.id, device).second) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("device '{}' declared twice", device.id));
    }
  }
  study.inventory.allocation = config.allocation;
  validate_inventory(study.inventory);
  study.config = std::move(config);
  study.scores = std::move(scores);
  return study;
}

Study load_study(const std::filesystem::path& config_path,
                 const std::filesystem::path& records_path,
                 const std::optional<std::filesystem::path>& scores_path) {
  ProjectConfig config = load_config(config_path);
  auto records = read_records_csv(records_path);
  std::optional<ScoreTable> scores;
  if (scores_path) scores = read_scores_csv(*scores_path);
  return make_study(std::move(config), std::move(records), std::move(scores));
}

std::vector<SystemProfile> build_profiles(const Study& study, const EmissionParams& params,
                                          ProfileOptions options) {
  const auto breakdowns = production_breakdowns(study.inventory, params);
  std::vector<SystemProfile> out;
  for (const auto& spec : study.inventory.systems) {
    SystemProfile profile;
    profile.name = spec.name;
    profile.role = spec.role;
    profile.kd_method = spec.kd_method;
    profile.student_params_millions = spec.student_params_millions;
    profile.production_footprint_kgco2e = breakdowns.at(spec.name).total();
    const auto cost = inference_cost_per_token(study.inventory, spec.name, params);
    if (!cost) {
      throw Error(ErrorCode::MissingInferenceData,
                  fmt::format("system '{}' has no token-counted inference records and no "
                              "infer_cost_kgco2e_per_token override",
                              spec.name));
    }
    profile.infer_cost_kgco2e_per_token = *cost;
    if (study.scores && study.scores->has(spec.name)) {
      profile.quality_scores = study.scores->of(spec.name);
    } else if (options.require_scores) {
      throw Error(ErrorCode::MissingScores, fmt::format("no scores for system '{}'", spec.name));
    }
    out.push_back(std::move(profile));
  }
  return out;
}

}  // namespace kdlca::report
