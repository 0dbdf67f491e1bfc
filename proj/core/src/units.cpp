// SPDX-License-Identifier: Apache-2.0
#include "kdlca/units.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "kdlca/error.hpp"

namespace kdlca {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingEnergySource: return "MissingEnergySource";
    case ErrorCode::NonPositiveRuntime: return "NonPositiveRuntime";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::UnknownDevice: return "UnknownDevice";
    case ErrorCode::UnknownSystem: return "UnknownSystem";
    case ErrorCode::MissingAUR: return "MissingAUR";
    case ErrorCode::MissingTeacherLedger: return "MissingTeacherLedger";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::MissingTeacherFit: return "MissingTeacherFit";
    case ErrorCode::RaggedMatrix: return "RaggedMatrix";
    case ErrorCode::MissingScores: return "MissingScores";
    case ErrorCode::NoTeacherProfile: return "NoTeacherProfile";
    case ErrorCode::NoBaselineProfile: return "NoBaselineProfile";
    case ErrorCode::RangeViolatesDomain: return "RangeViolatesDomain";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MissingReferences: return "MissingReferences";
    case ErrorCode::MissingInferenceData: return "MissingInferenceData";
    case ErrorCode::UnknownFixture: return "UnknownFixture";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::TeacherTrain: return "train";
    case Phase::Distill: return "distill";
    case Phase::Infer: return "infer";
  }
  return "train";
}

Phase parse_phase(std::string_view text) {
  if (text == "train" || text == "teacher_train") return Phase::TeacherTrain;
  if (text == "distill") return Phase::Distill;
  if (text == "infer") return Phase::Infer;
  throw Error(ErrorCode::ParseError, fmt::format("unknown phase '{}'", text));
}

std::string_view to_string(SystemRole role) noexcept {
  switch (role) {
    case SystemRole::Teacher: return "teacher";
    case SystemRole::NoKD: return "nokd";
    case SystemRole::KDStudent: return "kd_student";
  }
  return "nokd";
}

SystemRole parse_role(std::string_view text) {
  if (text == "teacher") return SystemRole::Teacher;
  if (text == "nokd" || text == "no-kd" || text == "no_kd") return SystemRole::NoKD;
  if (text == "kd_student" || text == "student" || text == "kd") return SystemRole::KDStudent;
  throw Error(ErrorCode::ParseError, fmt::format("unknown system role '{}'", text));
}

void validate_device(const Device& device) {
  if (!(device.lifetime_hours > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("device '{}': lifetime_hours must be positive", device.id));
  }
  if (!(device.manufacturing_footprint_kgco2e >= 0.0)) {
    throw Error(ErrorCode::NegativeValue,
                fmt::format("device '{}': manufacturing footprint must be nonnegative", device.id));
  }
}

void validate_record(const MeasurementRecord& record) {
  if (!record.energy_kwh && !record.avg_power_kw) {
    throw Error(ErrorCode::MissingEnergySource,
                fmt::format("record for '{}' on '{}' has neither energy_kwh nor avg_power_kw",
                            record.system, record.device_id));
  }
  if (!(record.runtime_hours > 0.0)) {
    throw Error(ErrorCode::NonPositiveRuntime,
                fmt::format("record for '{}' on '{}' has runtime_hours {}", record.system,
                            record.device_id, record.runtime_hours));
  }
  if ((record.energy_kwh && !(*record.energy_kwh >= 0.0)) ||
      (record.avg_power_kw && !(*record.avg_power_kw >= 0.0))) {
    throw Error(ErrorCode::NegativeValue,
                fmt::format("record for '{}' on '{}' has a negative energy or power value",
                            record.system, record.device_id));
  }
  if (record.batch_size && *record.batch_size == 0) {
    throw Error(ErrorCode::InvalidArgument, "batch_size must be positive when present");
  }
}

double effective_energy_kwh(const MeasurementRecord& record) {
  if (record.energy_kwh) return *record.energy_kwh;
  if (record.avg_power_kw) return *record.avg_power_kw * record.runtime_hours;
  throw Error(ErrorCode::MissingEnergySource, "record has no energy source");
}

std::optional<double> energy_discrepancy(const MeasurementRecord& record) {
  if (!record.energy_kwh || !record.avg_power_kw) return std::nullopt;
  const double estimate = *record.avg_power_kw * record.runtime_hours;
  const double scale = std::max(*record.energy_kwh, 1e-12);
  return std::abs(*record.energy_kwh - estimate) / scale;
}

EmissionParams EmissionParams::reference_datacenter() {
  EmissionParams params;
  params.pue = 1.24;
  params.grid_kgco2e_per_kwh = 0.033;
  params.aur_by_phase = {{Phase::TeacherTrain, 0.8}, {Phase::Distill, 0.8}, {Phase::Infer, 0.2}};
  return params;
}

double EmissionParams::aur(Phase phase) const {
  const auto it = aur_by_phase.find(phase);
  if (it == aur_by_phase.end()) {
    throw Error(ErrorCode::MissingAUR,
                fmt::format("no active utilization rate configured for phase '{}'", to_string(phase)));
  }
  return it->second;
}

void validate_params(const EmissionParams& params) {
  if (!(params.pue >= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("PUE must be >= 1, got {}", params.pue));
  }
  if (!(params.grid_kgco2e_per_kwh >= 0.0)) {
    throw Error(ErrorCode::NegativeValue, "grid emission factor must be nonnegative");
  }
  for (const auto& [phase, aur] : params.aur_by_phase) {
    if (!(aur > 0.0 && aur <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("AUR for phase '{}' must lie in (0, 1], got {}", to_string(phase), aur));
    }
  }
  if (params.lifetime_override_hours && !(*params.lifetime_override_hours > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "lifetime override must be positive");
  }
}

Device reference_gpu(std::string id) {
  return Device{std::move(id), 150.0, kDefaultLifetimeHours};
}

double SystemProfile::mean_quality() const {
  if (quality_scores.empty()) {
    throw Error(ErrorCode::MissingScores, fmt::format("system '{}' has no quality scores", name));
  }
  return std::accumulate(quality_scores.begin(), quality_scores.end(), 0.0) /
         static_cast<double>(quality_scores.size());
}

void validate_profile(const SystemProfile& profile) {
  if (profile.role == SystemRole::Teacher && profile.kd_method) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("teacher profile '{}' cannot carry a KD method", profile.name));
  }
  if (!(profile.production_footprint_kgco2e >= 0.0) ||
      !(profile.infer_cost_kgco2e_per_token >= 0.0)) {
    throw Error(ErrorCode::NegativeValue,
                fmt::format("profile '{}' has a negative footprint", profile.name));
  }
  if (profile.student_params_millions && !(*profile.student_params_millions > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "student parameter count must be positive");
  }
}

}  // namespace kdlca
