#include "fbplan/common.hpp"

namespace fbplan {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfiguration: return "InvalidConfiguration";
    case ErrorCode::InvalidRotation: return "InvalidRotation";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidPair: return "InvalidPair";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::StartBlocked: return "StartBlocked";
    case ErrorCode::GoalBlocked: return "GoalBlocked";
    case ErrorCode::EmptyFeasibleSet: return "EmptyFeasibleSet";
    case ErrorCode::InfeasibleEndpoint: return "InfeasibleEndpoint";
    case ErrorCode::AnchorGenerationFailed: return "AnchorGenerationFailed";
    case ErrorCode::SolverDiverged: return "SolverDiverged";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace fbplan
