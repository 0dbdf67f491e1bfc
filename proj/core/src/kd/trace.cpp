// SPDX-License-Identifier: Apache-2.0
#include "kdlca/kd/trace.hpp"

#include "kdlca/error.hpp"

namespace kdlca::kd {

void ComputeTrace::merge(const ComputeTrace& other) noexcept {
  teacher_encoder_ += other.teacher_encoder_;
  teacher_decoder_ += other.teacher_decoder_;
  student_ += other.student_;
}

std::vector<MeasurementRecord> trace_to_records(const ComputeTrace& trace,
                                                const StepEnergy& energy,
                                                std::string_view device_id,
                                                const StepThroughput& throughput,
                                                std::string_view system) {
  if (!(energy.teacher_kwh_per_step > 0.0 && energy.student_kwh_per_step > 0.0 &&
        throughput.teacher_steps_per_hour > 0.0 && throughput.student_steps_per_hour > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "per-step energy and throughput constants must be positive");
  }
  std::vector<MeasurementRecord> out;
  const auto emit = [&](std::uint64_t steps, double kwh_per_step, double steps_per_hour) {
    if (steps == 0) return;
    MeasurementRecord r;
    r.system = std::string(system);
    r.phase = trace.phase();
    r.device_id = std::string(device_id);
    r.energy_kwh = static_cast<double>(steps) * kwh_per_step;
    r.runtime_hours = static_cast<double>(steps) / steps_per_hour;
    r.tokens_processed = steps;
    r.repeat_index = static_cast<std::uint32_t>(out.size());
    out.push_back(std::move(r));
  };
  emit(trace.teacher_token_steps(), energy.teacher_kwh_per_step, throughput.teacher_steps_per_hour);
  emit(trace.student_token_steps(), energy.student_kwh_per_step, throughput.student_steps_per_hour);
  return out;
}

}  // namespace kdlca::kd
