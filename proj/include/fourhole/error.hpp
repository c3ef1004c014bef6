#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fourhole {

enum class ErrorCode {
  kNonFiniteInput,
  kDegenerateRootFailure,
  kStepBudgetExceeded,
  kSlopeOverflow,
  kParabolicCenterUndefined,
  kNotLoxodromic,
  kWindowTooWide,
  kResidualTooLarge,
  kNotBqAccepted,
  kNonRealInput,
  kSeedNotAvailable,
  kInvalidSpec,
  kIoFailure,
  kInvalidArgument,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kDegenerateRootFailure: return "DegenerateRootFailure";
    case ErrorCode::kStepBudgetExceeded: return "StepBudgetExceeded";
    case ErrorCode::kSlopeOverflow: return "SlopeOverflow";
    case ErrorCode::kParabolicCenterUndefined: return "ParabolicCenterUndefined";
    case ErrorCode::kNotLoxodromic: return "NotLoxodromic";
    case ErrorCode::kWindowTooWide: return "WindowTooWide";
    case ErrorCode::kResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::kNotBqAccepted: return "NotBqAccepted";
    case ErrorCode::kNonRealInput: return "NonRealInput";
    case ErrorCode::kSeedNotAvailable: return "SeedNotAvailable";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fourhole
