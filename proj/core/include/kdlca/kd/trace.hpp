// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "kdlca/units.hpp"

namespace kdlca::kd {

/// Token-step counters of a desk-scale KD run. Counters only grow; workers
/// keep private traces and merge() them at the end.
class ComputeTrace {
 public:
  explicit ComputeTrace(Phase phase = Phase::Distill) noexcept : phase_(phase) {}

  [[nodiscard]] Phase phase() const noexcept { return phase_; }
  [[nodiscard]] std::uint64_t teacher_encoder_steps() const noexcept { return teacher_encoder_; }
  [[nodiscard]] std::uint64_t teacher_decoder_steps() const noexcept { return teacher_decoder_; }
  [[nodiscard]] std::uint64_t teacher_token_steps() const noexcept {
    return teacher_encoder_ + teacher_decoder_;
  }
  [[nodiscard]] std::uint64_t student_token_steps() const noexcept { return student_; }

  void add_teacher_encoder(std::uint64_t steps) noexcept { teacher_encoder_ += steps; }
  void add_teacher_decoder(std::uint64_t steps) noexcept { teacher_decoder_ += steps; }
  void add_student(std::uint64_t steps) noexcept { student_ += steps; }
  void merge(const ComputeTrace& other) noexcept;

 private:
  Phase phase_;
  std::uint64_t teacher_encoder_ = 0;
  std::uint64_t teacher_decoder_ = 0;
  std::uint64_t student_ = 0;
};

struct StepEnergy {
  double teacher_kwh_per_step = 0.0;
  double student_kwh_per_step = 0.0;
};

struct StepThroughput {
  double teacher_steps_per_hour = 0.0;
  double student_steps_per_hour = 0.0;
};

/// One record per role with nonzero steps: energy = steps * per-step energy,
/// runtime = steps / throughput, tokens = steps.
std::vector<MeasurementRecord> trace_to_records(const ComputeTrace& trace,
                                                const StepEnergy& energy,
                                                std::string_view device_id,
                                                const StepThroughput& throughput,
                                                std::string_view system);

}  // namespace kdlca::kd
