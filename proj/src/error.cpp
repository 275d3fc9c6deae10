#include "schedrisk/error.hpp"

namespace schedrisk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::MultipleSources: return "MultipleSources";
    case ErrorCode::MultipleSinks: return "MultipleSinks";
    case ErrorCode::UnknownPredecessor: return "UnknownPredecessor";
    case ErrorCode::BadDistributionParams: return "BadDistributionParams";
    case ErrorCode::BadRiskTarget: return "BadRiskTarget";
    case ErrorCode::PathExplosion: return "PathExplosion";
    case ErrorCode::EvOutOfRange: return "EvOutOfRange";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::DegenerateProject: return "DegenerateProject";
    case ErrorCode::EvZero: return "EvZero";
    case ErrorCode::BadObservation: return "BadObservation";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::Syntax: return "Syntax";
    case ErrorCode::UnknownField: return "UnknownField";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string message, std::string subject)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      subject_(std::move(subject)) {}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError: return 2;
    case ErrorCode::ConfigError: return 3;
    default: return 1;
  }
}

}  // namespace schedrisk
