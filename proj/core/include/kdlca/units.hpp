// SPDX-License-Identifier: Apache-2.0
//
// Domain types shared by every module. All emissions are kgCO2e, all
// energies kWh, all durations hours; field names carry the unit.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kdlca {

enum class Phase { TeacherTrain, Distill, Infer };

inline constexpr std::array<Phase, 3> kAllPhases = {Phase::TeacherTrain, Phase::Distill,
                                                    Phase::Infer};

/// "train", "distill", "infer".
std::string_view to_string(Phase phase) noexcept;
/// Accepts the canonical names plus "teacher_train"; throws ParseError otherwise.
Phase parse_phase(std::string_view text);

inline constexpr double kHoursPerYear = 365.0 * 24.0;
/// Five-year device lifetime, 5 * 365 * 24 = 43,800 h.
inline constexpr double kDefaultLifetimeHours = 5.0 * kHoursPerYear;
inline constexpr double kGramsPerKilogram = 1000.0;

constexpr double to_grams_co2e(double kgco2e) noexcept { return kgco2e * kGramsPerKilogram; }
constexpr double years_to_hours(double years) noexcept { return years * kHoursPerYear; }

struct Device {
  std::string id;
  double manufacturing_footprint_kgco2e = 0.0;
  double lifetime_hours = kDefaultLifetimeHours;
};

void validate_device(const Device& device);

/// One observed (phase, device) sample from a pipeline run. `system` names the
/// pipeline the sample belongs to (teacher, No-KD, or a KD variant).
struct MeasurementRecord {
  std::string system;
  Phase phase = Phase::TeacherTrain;
  std::string device_id;
  std::optional<double> energy_kwh;
  std::optional<double> avg_power_kw;
  double runtime_hours = 0.0;
  std::optional<std::uint64_t> tokens_processed;
  std::optional<std::uint32_t> batch_size;
  std::uint32_t repeat_index = 0;

  friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

/// Throws MissingEnergySource, NonPositiveRuntime or NegativeValue.
void validate_record(const MeasurementRecord& record);

/// Measured energy when present, otherwise average power times runtime.
double effective_energy_kwh(const MeasurementRecord& record);

/// Relative disagreement between the measured energy and power x runtime, when
/// both are present. The measured value is authoritative; this only feeds warnings.
std::optional<double> energy_discrepancy(const MeasurementRecord& record);

inline constexpr double kEnergyDiscrepancyTolerance = 0.05;

struct EmissionParams {
  double pue = 1.0;
  double grid_kgco2e_per_kwh = 0.0;
  std::map<Phase, double> aur_by_phase;
  std::optional<double> lifetime_override_hours;

  /// PUE 1.24, 0.033 kgCO2e/kWh, AUR 0.8 for training and distillation, 0.2 for inference.
  static EmissionParams reference_datacenter();

  /// Throws MissingAUR when the phase has no utilization rate.
  [[nodiscard]] double aur(Phase phase) const;
};

void validate_params(const EmissionParams& params);

/// 150 kgCO2e per GPU over 43,800 h.
Device reference_gpu(std::string id = "gpu");

struct PhaseFootprint {
  Phase phase = Phase::TeacherTrain;
  std::string device_id;
  double operational_kgco2e = 0.0;
  double embodied_kgco2e = 0.0;

  [[nodiscard]] double total() const noexcept { return operational_kgco2e + embodied_kgco2e; }
};

enum class SystemRole { Teacher, NoKD, KDStudent };

std::string_view to_string(SystemRole role) noexcept;
/// "teacher", "nokd" / "no-kd", "kd_student" / "student".
SystemRole parse_role(std::string_view text);

struct SystemProfile {
  std::string name;
  SystemRole role = SystemRole::NoKD;
  std::optional<std::string> kd_method;
  std::optional<double> student_params_millions;
  double production_footprint_kgco2e = 0.0;
  double infer_cost_kgco2e_per_token = 0.0;
  std::vector<double> quality_scores;

  [[nodiscard]] double mean_quality() const;
};

void validate_profile(const SystemProfile& profile);

}  // namespace kdlca
