// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kdlca {

enum class ErrorCode {
  InvalidArgument,
  MissingEnergySource,
  NonPositiveRuntime,
  NegativeValue,
  NotNormalized,
  UnknownDevice,
  UnknownSystem,
  MissingAUR,
  MissingTeacherLedger,
  TooFewPoints,
  DegenerateFit,
  MissingTeacherFit,
  RaggedMatrix,
  MissingScores,
  NoTeacherProfile,
  NoBaselineProfile,
  RangeViolatesDomain,
  LengthMismatch,
  MissingReferences,
  MissingInferenceData,
  UnknownFixture,
  ParseError,
  SchemaVersionMismatch,
  Io,
  Usage,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for every library failure; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kdlca
