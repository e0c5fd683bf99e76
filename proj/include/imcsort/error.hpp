// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace imcsort {

enum class ErrorKind {
  DimensionTooSmall,
  ConstantRowWrite,
  ValueOutOfRange,
  RowOutOfRange,
  ColumnOutOfRange,
  InvalidInstruction,
  InvalidProgram,
  WidthZero,
  NotPowerOfTwo,
  StageOutOfRange,
  NoTrace,
  InvalidStats,
  InvalidConfig,
  MissingBaselineField,
  Parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionTooSmall: return "dimension-too-small";
    case ErrorKind::ConstantRowWrite: return "constant-row-write";
    case ErrorKind::ValueOutOfRange: return "value-out-of-range";
    case ErrorKind::RowOutOfRange: return "row-out-of-range";
    case ErrorKind::ColumnOutOfRange: return "column-out-of-range";
    case ErrorKind::InvalidInstruction: return "invalid-instruction";
    case ErrorKind::InvalidProgram: return "invalid-program";
    case ErrorKind::WidthZero: return "width-zero";
    case ErrorKind::NotPowerOfTwo: return "not-a-power-of-two";
    case ErrorKind::StageOutOfRange: return "stage-index-out-of-range";
    case ErrorKind::NoTrace: return "no-trace-recorded";
    case ErrorKind::InvalidStats: return "invalid-stats";
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::MissingBaselineField: return "missing-baseline-field";
    case ErrorKind::Parse: return "parse-error";
  }
  return "unknown";
}

/// Every validation failure in the library is reported as an Error; the
/// kind lets callers (and the CLI's exit-code mapping) tell them apart.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace imcsort
