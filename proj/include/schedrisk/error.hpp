#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace schedrisk {

enum class ErrorCode {
  // model validation
  CycleDetected,
  MultipleSources,
  MultipleSinks,
  UnknownPredecessor,
  BadDistributionParams,
  BadRiskTarget,
  // cpm
  PathExplosion,
  EvOutOfRange,
  // statistics / indices / control
  EmptySample,
  DegenerateProject,
  EvZero,
  BadObservation,
  KTooLarge,
  ShapeMismatch,
  // project file
  Syntax,
  UnknownField,
  DuplicateId,
  // plumbing
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Base for every error raised by the library. `subject()` carries the
/// offending id (activity, risk, file row) when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string subject = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

/// Exit code the CLI reports for an error: 1 domain/validation, 2 I/O, 3 config.
int exit_code_for(ErrorCode code);

}  // namespace schedrisk
