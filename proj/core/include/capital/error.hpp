#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace capital {

enum class ErrorCode {
  kUnknownObservation,
  kInactiveObservation,
  kUnknownAction,
  kUnavailableAction,
  kMissingDynamics,
  kBudgetExceeded,
  kUnrealizablePrefix,
  kUnrealizableHistory,
  kNotAMultiple,
  kNegativeReward,
  kDivergentObjective,
  kNoAvailableAction,
  kEnumerationCapExceeded,
  kInvalidDistribution,
  kInvalidArgument,
  kParseError,
  kInvalidGrounding,
  kInvalidConfig,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries a stable code so callers
// (the CLI, propcheck) can map it to exit codes or structured reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace capital
