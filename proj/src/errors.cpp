#include "holonomy/errors.hpp"

namespace holonomy {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidDuration: return "InvalidDuration";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::TimeOutOfRange: return "TimeOutOfRange";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnsupportedLoop: return "UnsupportedLoop";
    case ErrorCode::StepCountTooSmall: return "StepCountTooSmall";
    case ErrorCode::TooFewStates: return "TooFewStates";
    case ErrorCode::NoPeakInWindow: return "NoPeakInWindow";
    case ErrorCode::UnderdeterminedFit: return "UnderdeterminedFit";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace holonomy
