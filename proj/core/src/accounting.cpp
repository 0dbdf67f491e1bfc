// SPDX-License-Identifier: Apache-2.0
#include "kdlca/accounting.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>

#include "kdlca/error.hpp"

namespace kdlca {

AllocationPolicy AllocationPolicy::shared(std::uint32_t k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "shared allocation needs k >= 1");
  return {Kind::SharedAcrossK, k};
}

double AllocationPolicy::teacher_share() const noexcept {
  switch (kind) {
    case Kind::FullAllocation: return 1.0;
    case Kind::SharedAcrossK: return 1.0 / static_cast<double>(k);
    case Kind::SunkTeacher: return 0.0;
  }
  return 1.0;
}

std::string to_string(const AllocationPolicy& policy) {
  switch (policy.kind) {
    case AllocationPolicy::Kind::FullAllocation: return "full";
    case AllocationPolicy::Kind::SharedAcrossK: return fmt::format("shared:{}", policy.k);
    case AllocationPolicy::Kind::SunkTeacher: return "sunk";
  }
  return "full";
}

PhaseFootprint phase_footprint(const MeasurementRecord& record, const Device& device,
                               const EmissionParams& params) {
  validate_record(record);
  validate_device(device);
  const double lifetime_hours = params.lifetime_override_hours.value_or(device.lifetime_hours);
  const double aur = params.aur(record.phase);

  PhaseFootprint out;
  out.phase = record.phase;
  out.device_id = record.device_id;
  out.operational_kgco2e = params.pue * effective_energy_kwh(record) * params.grid_kgco2e_per_kwh;
  out.embodied_kgco2e =
      device.manufacturing_footprint_kgco2e * record.runtime_hours / (lifetime_hours * aur);
  return out;
}

PhaseFootprint phase_footprint(const MeasurementRecord& record, const DeviceCatalog& devices,
                               const EmissionParams& params) {
  const auto it = devices.find(record.device_id);
  if (it == devices.end()) {
    throw Error(ErrorCode::UnknownDevice, fmt::format("unknown device '{}'", record.device_id));
  }
  return phase_footprint(record, it->second, params);
}

double SystemLedger::total() const noexcept {
  double sum = 0.0;
  for (const auto& entry : per_phase) sum += entry.total();
  return sum;
}

double SystemLedger::operational_total() const noexcept {
  double sum = 0.0;
  for (const auto& entry : per_phase) sum += entry.operational_kgco2e;
  return sum;
}

double SystemLedger::embodied_total() const noexcept {
  double sum = 0.0;
  for (const auto& entry : per_phase) sum += entry.embodied_kgco2e;
  return sum;
}

PhaseFootprint SystemLedger::phase(Phase phase) const {
  PhaseFootprint out;
  out.phase = phase;
  out.device_id = "*";
  for (const auto& entry : per_phase) {
    if (entry.phase != phase) continue;
    out.operational_kgco2e += entry.operational_kgco2e;
    out.embodied_kgco2e += entry.embodied_kgco2e;
  }
  return out;
}

bool SystemLedger::has_phase(Phase phase) const noexcept {
  return std::any_of(per_phase.begin(), per_phase.end(),
                     [phase](const PhaseFootprint& e) { return e.phase == phase; });
}

SystemLedger aggregate_ledger(std::string system_name, std::span<const MeasurementRecord> records,
                              const DeviceCatalog& devices, const EmissionParams& params,
                              AllocationPolicy allocation) {
  std::map<std::tuple<Phase, std::string>, PhaseFootprint> buckets;
  for (const auto& record : records) {
    const PhaseFootprint fp = phase_footprint(record, devices, params);
    auto [it, inserted] = buckets.try_emplace({fp.phase, fp.device_id}, fp);
    if (!inserted) {
      it->second.operational_kgco2e += fp.operational_kgco2e;
      it->second.embodied_kgco2e += fp.embodied_kgco2e;
    }
  }
  SystemLedger ledger{std::move(system_name), {}, allocation};
  ledger.per_phase.reserve(buckets.size());
  for (auto& [key, fp] : buckets) ledger.per_phase.push_back(std::move(fp));
  return ledger;
}

ProductionBreakdown production_breakdown(const SystemLedger& ledger, SystemRole role,
                                         const SystemLedger* teacher) {
  const PhaseFootprint own_train = ledger.phase(Phase::TeacherTrain);
  const PhaseFootprint own_distill = ledger.phase(Phase::Distill);

  ProductionBreakdown out;
  out.distillation_kgco2e = own_distill.total();
  out.operational_kgco2e = own_distill.operational_kgco2e;
  out.embodied_kgco2e = own_distill.embodied_kgco2e;

  switch (role) {
    case SystemRole::Teacher:
      out.teacher_training_kgco2e = own_train.total();
      out.operational_kgco2e += own_train.operational_kgco2e;
      out.embodied_kgco2e += own_train.embodied_kgco2e;
      break;
    case SystemRole::NoKD:
      out.model_training_kgco2e = own_train.total();
      out.operational_kgco2e += own_train.operational_kgco2e;
      out.embodied_kgco2e += own_train.embodied_kgco2e;
      break;
    case SystemRole::KDStudent: {
      const double share = ledger.allocation.teacher_share();
      if (share == 0.0) break;
      if (teacher == nullptr && !ledger.has_phase(Phase::TeacherTrain)) {
        throw Error(ErrorCode::MissingTeacherLedger,
                    fmt::format("student '{}' needs a teacher ledger under '{}' allocation",
                                ledger.system_name, to_string(ledger.allocation)));
      }
      double operational = own_train.operational_kgco2e;
      double embodied = own_train.embodied_kgco2e;
      if (teacher != nullptr) {
        const PhaseFootprint teacher_train = teacher->phase(Phase::TeacherTrain);
        operational += teacher_train.operational_kgco2e;
        embodied += teacher_train.embodied_kgco2e;
      }
      out.teacher_training_kgco2e = share * (operational + embodied);
      out.operational_kgco2e += share * operational;
      out.embodied_kgco2e += share * embodied;
      break;
    }
  }
  return out;
}

double production_footprint(const SystemLedger& ledger, SystemRole role,
                            const SystemLedger* teacher) {
  return production_breakdown(ledger, role, teacher).total();
}

double total_at_volume(const SystemProfile& profile, double x_tokens) {
  return profile.production_footprint_kgco2e + x_tokens * profile.infer_cost_kgco2e_per_token;
}

const SystemSpec& LifeCycleInventory::system(std::string_view name) const {
  const auto it = std::find_if(systems.begin(), systems.end(),
                               [name](const SystemSpec& s) { return s.name == name; });
  if (it == systems.end()) {
    throw Error(ErrorCode::UnknownSystem, fmt::format("unknown system '{}'", name));
  }
  return *it;
}

std::vector<MeasurementRecord> LifeCycleInventory::records_for(std::string_view name) const {
  std::vector<MeasurementRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [name](const MeasurementRecord& r) { return r.system == name; });
  return out;
}

const SystemSpec* LifeCycleInventory::teacher_of(const SystemSpec& spec) const {
  if (spec.teacher) return &system(*spec.teacher);
  const SystemSpec* found = nullptr;
  for (const auto& s : systems) {
    if (s.role != SystemRole::Teacher) continue;
    if (found != nullptr) return nullptr;  // ambiguous without an explicit teacher
    found = &s;
  }
  return found;
}

void validate_inventory(const LifeCycleInventory& inventory) {
  std::map<std::string, int, std::less<>> names;
  for (const auto& s : inventory.systems) {
    if (++names[s.name] > 1) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("system '{}' declared twice", s.name));
    }
    if (s.role == SystemRole::Teacher && s.kd_method) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("teacher '{}' cannot carry a KD method", s.name));
    }
    if (s.teacher) {
      const SystemSpec& t = inventory.system(*s.teacher);
      if (t.role != SystemRole::Teacher) {
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("'{}' names '{}' as teacher but it is not a teacher", s.name,
                                *s.teacher));
      }
    }
  }
  for (const auto& [id, device] : inventory.devices) validate_device(device);
  for (const auto& record : inventory.records) {
    if (!names.contains(record.system)) {
      throw Error(ErrorCode::UnknownSystem,
                  fmt::format("records reference undeclared system '{}'", record.system));
    }
    if (!inventory.devices.contains(record.device_id)) {
      throw Error(ErrorCode::UnknownDevice, fmt::format("unknown device '{}'", record.device_id));
    }
    validate_record(record);
  }
}

std::map<std::string, SystemLedger> build_ledgers(const LifeCycleInventory& inventory,
                                                  const EmissionParams& params) {
  std::map<std::string, SystemLedger> out;
  for (const auto& spec : inventory.systems) {
    const auto records = inventory.records_for(spec.name);
    out.emplace(spec.name, aggregate_ledger(spec.name, records, inventory.devices, params,
                                            inventory.allocation));
  }
  return out;
}

std::map<std::string, ProductionBreakdown> production_breakdowns(
    const LifeCycleInventory& inventory, const EmissionParams& params) {
  const auto ledgers = build_ledgers(inventory, params);
  std::map<std::string, ProductionBreakdown> out;
  for (const auto& spec : inventory.systems) {
    const SystemLedger* teacher = nullptr;
    if (spec.role == SystemRole::KDStudent) {
      if (const SystemSpec* t = inventory.teacher_of(spec)) teacher = &ledgers.at(t->name);
    }
    out.emplace(spec.name, production_breakdown(ledgers.at(spec.name), spec.role, teacher));
  }
  return out;
}

std::optional<double> inference_cost_per_token(const LifeCycleInventory& inventory,
                                               std::string_view system,
                                               const EmissionParams& params) {
  const SystemSpec& spec = inventory.system(system);
  if (spec.infer_cost_kgco2e_per_token) return spec.infer_cost_kgco2e_per_token;
  double footprint = 0.0;
  double tokens = 0.0;
  for (const auto& record : inventory.records) {
    if (record.system != system || record.phase != Phase::Infer || !record.tokens_processed) {
      continue;
    }
    footprint += phase_footprint(record, inventory.devices, params).total();
    tokens += static_cast<double>(*record.tokens_processed);
  }
  if (tokens <= 0.0) return std::nullopt;
  return footprint / tokens;
}

}  // namespace kdlca
