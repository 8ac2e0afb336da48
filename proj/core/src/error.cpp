#include "capital/error.hpp"

namespace capital {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownObservation: return "UnknownObservation";
    case ErrorCode::kInactiveObservation: return "InactiveObservation";
    case ErrorCode::kUnknownAction: return "UnknownAction";
    case ErrorCode::kUnavailableAction: return "UnavailableAction";
    case ErrorCode::kMissingDynamics: return "MissingDynamics";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kUnrealizablePrefix: return "UnrealizablePrefix";
    case ErrorCode::kUnrealizableHistory: return "UnrealizableHistory";
    case ErrorCode::kNotAMultiple: return "NotAMultiple";
    case ErrorCode::kNegativeReward: return "NegativeReward";
    case ErrorCode::kDivergentObjective: return "DivergentObjective";
    case ErrorCode::kNoAvailableAction: return "NoAvailableAction";
    case ErrorCode::kEnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorCode::kInvalidDistribution: return "InvalidDistribution";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvalidGrounding: return "InvalidGrounding";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace capital
