#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace omni {

enum class ErrorCode {
  InvalidInstance,
  InvalidGroupIndex,
  InvalidSubset,
  InvalidProbability,
  InvalidArgument,
  Infeasible,
  Unbounded,
  TooLarge,
  SingularSystem,
  NegativeRate,
  NotTwoGroups,
  NoSignChange,
  NonIntegralTransmission,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::InvalidGroupIndex: return "InvalidGroupIndex";
    case ErrorCode::InvalidSubset: return "InvalidSubset";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::NotTwoGroups: return "NotTwoGroups";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::NonIntegralTransmission: return "NonIntegralTransmission";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this type; `code()` is
/// what callers branch on, `what()` is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace omni
