// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "kdlca/error.hpp"
#include "kdlca/units.hpp"

#define EXPECT_KDLCA_ERROR(stmt, expected_code)                                   \
  do {                                                                            \
    try {                                                                         \
      stmt;                                                                       \
      ADD_FAILURE() << "expected kdlca::Error " << kdlca::to_string(expected_code); \
    } catch (const kdlca::Error& e) {                                             \
      EXPECT_EQ(e.code(), expected_code) << e.what();                             \
    }                                                                             \
  } while (0)

namespace testutil {

inline double rel_err(double got, double want) {
  if (want == 0.0) return std::fabs(got);
  return std::fabs(got - want) / std::fabs(want);
}

inline kdlca::MeasurementRecord record(std::string system, kdlca::Phase phase, double energy_kwh,
                                       double runtime_hours, std::string device = "gpu") {
  kdlca::MeasurementRecord r;
  r.system = std::move(system);
  r.phase = phase;
  r.device_id = std::move(device);
  r.energy_kwh = energy_kwh;
  r.runtime_hours = runtime_hours;
  return r;
}

}  // namespace testutil
