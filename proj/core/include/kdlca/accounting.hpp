// SPDX-License-Identifier: Apache-2.0
//
// Per-(phase, device) carbon accounting:
//
//   I = PUE * E * EGM  +  F_prod * t / (t_life * AUR(phase))
//       '--operational-'  '-----------embodied-----------'
//
// summed over every phase and device of a system, plus teacher-cost
// allocation when a student reuses a teacher.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kdlca/units.hpp"

namespace kdlca {

struct AllocationPolicy {
  enum class Kind { FullAllocation, SharedAcrossK, SunkTeacher };

  Kind kind = Kind::FullAllocation;
  std::uint32_t k = 1;

  static AllocationPolicy full() noexcept { return {Kind::FullAllocation, 1}; }
  static AllocationPolicy shared(std::uint32_t k);
  static AllocationPolicy sunk() noexcept { return {Kind::SunkTeacher, 1}; }

  /// Fraction of teacher training billed to one student: 1, 1/k or 0.
  [[nodiscard]] double teacher_share() const noexcept;

  friend bool operator==(const AllocationPolicy&, const AllocationPolicy&) = default;
};

/// "full", "shared:<k>", "sunk".
std::string to_string(const AllocationPolicy& policy);

using DeviceCatalog = std::map<std::string, Device, std::less<>>;

PhaseFootprint phase_footprint(const MeasurementRecord& record, const Device& device,
                               const EmissionParams& params);
/// Throws UnknownDevice when record.device_id is not in the catalog.
PhaseFootprint phase_footprint(const MeasurementRecord& record, const DeviceCatalog& devices,
                               const EmissionParams& params);

struct SystemLedger {
  std::string system_name;
  /// One entry per (phase, device_id), ordered by phase then device.
  std::vector<PhaseFootprint> per_phase;
  AllocationPolicy allocation;

  [[nodiscard]] double total() const noexcept;
  [[nodiscard]] double operational_total() const noexcept;
  [[nodiscard]] double embodied_total() const noexcept;
  /// Operational and embodied totals for one phase, summed over devices.
  [[nodiscard]] PhaseFootprint phase(Phase phase) const;
  [[nodiscard]] bool has_phase(Phase phase) const noexcept;
};

SystemLedger aggregate_ledger(std::string system_name, std::span<const MeasurementRecord> records,
                              const DeviceCatalog& devices, const EmissionParams& params,
                              AllocationPolicy allocation = AllocationPolicy::full());

/// Production (pre-inference) footprint split by where it came from.
struct ProductionBreakdown {
  double teacher_training_kgco2e = 0.0;  ///< after allocation
  double model_training_kgco2e = 0.0;    ///< direct training of a No-KD model
  double distillation_kgco2e = 0.0;
  double operational_kgco2e = 0.0;
  double embodied_kgco2e = 0.0;

  [[nodiscard]] double total() const noexcept {
    return teacher_training_kgco2e + model_training_kgco2e + distillation_kgco2e;
  }
};

/// Teacher and No-KD systems pay their own training. A KD student pays its
/// distillation plus teacher_share() of the teacher's training, taken from
/// `teacher` when given and otherwise from train-phase entries of its own
/// ledger. Throws MissingTeacherLedger when a student needs teacher cost but
/// has none.
ProductionBreakdown production_breakdown(const SystemLedger& ledger, SystemRole role,
                                         const SystemLedger* teacher = nullptr);

double production_footprint(const SystemLedger& ledger, SystemRole role,
                            const SystemLedger* teacher = nullptr);

/// I(X) = I_prod + X * c_infer.
double total_at_volume(const SystemProfile& profile, double x_tokens);

/// Declared pipeline: what a system is and which teacher it distils from.
struct SystemSpec {
  std::string name;
  SystemRole role = SystemRole::NoKD;
  std::optional<std::string> kd_method;
  std::optional<double> student_params_millions;
  std::optional<std::string> teacher;
  /// Checkpoint family used when pruning non-improving checkpoints; defaults to name.
  std::string group;
  std::optional<double> infer_cost_kgco2e_per_token;
};

/// Everything needed to recompute footprints under a different parameter set.
struct LifeCycleInventory {
  std::vector<SystemSpec> systems;
  std::vector<MeasurementRecord> records;
  DeviceCatalog devices;
  AllocationPolicy allocation;

  [[nodiscard]] const SystemSpec& system(std::string_view name) const;
  [[nodiscard]] std::vector<MeasurementRecord> records_for(std::string_view name) const;
  /// The teacher a student distils from: its explicit teacher, or the only teacher.
  [[nodiscard]] const SystemSpec* teacher_of(const SystemSpec& spec) const;
};

/// Throws UnknownSystem for records naming undeclared systems and
/// UnknownDevice for unknown devices; validates every record.
void validate_inventory(const LifeCycleInventory& inventory);

std::map<std::string, SystemLedger> build_ledgers(const LifeCycleInventory& inventory,
                                                  const EmissionParams& params);

std::map<std::string, ProductionBreakdown> production_breakdowns(
    const LifeCycleInventory& inventory, const EmissionParams& params);

/// Inference footprint per decoded token: sum of infer-phase footprints over
/// the sum of their token counts. Empty when the system has no infer records
/// with tokens; the SystemSpec override, when present, wins.
std::optional<double> inference_cost_per_token(const LifeCycleInventory& inventory,
                                               std::string_view system,
                                               const EmissionParams& params);

}  // namespace kdlca
