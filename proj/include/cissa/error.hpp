#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cissa {

enum class ErrorCode {
  WindowOutOfRange,
  NonFiniteInput,
  EmptyMatrix,
  LagOutOfRange,
  VariantMismatch,
  ConvergenceFailure,
  EmptyGrouping,
  InvalidGrouping,
  NotMonthlyCompatible,
  ZeroNorm,
  DegenerateRegressor,
  InvalidParams,
  LengthMismatch,
  FileNotFound,
  ColumnMissing,
  NonNumericCell,
  NonMonotoneDates,
  IoFailure,
  InvalidConfig,
};

/// Stable name used in CLI error lines and Python exception messages.
std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cissa
