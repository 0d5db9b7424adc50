#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holonomy {

enum class ErrorCode {
  NonHermitianInput,
  DimensionMismatch,
  InvalidArgument,
  InvalidDuration,
  InvalidOrder,
  TimeOutOfRange,
  IndexOutOfRange,
  UnsupportedLoop,
  StepCountTooSmall,
  TooFewStates,
  NoPeakInWindow,
  UnderdeterminedFit,
  ModelMismatch,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace holonomy
