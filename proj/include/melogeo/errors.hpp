#pragma once

#include <stdexcept>
#include <string>

namespace melogeo {

enum class ErrorCode {
  // melody construction
  Empty,
  NonZeroOrigin,
  NonMonotoneTimes,
  LengthMismatch,
  // measures / scaling / compression preconditions
  DurationMismatch,
  QueryLongerThanReference,
  BadEpsilon,
  BadK,
  TooLarge,
  // json
  MalformedJson,
  SchemaViolation,
  // midi
  NotMidi,
  UnsupportedFormat,
  EmptyTrack,
  PolyphonyDetected,
  // broken internal invariant (cross-checks inside the algorithms)
  Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  /** PolyphonyDetected carries the offending tick. */
  Error(ErrorCode code, const std::string& message, long long tick);

  ErrorCode code() const noexcept { return code_; }
  long long tick() const noexcept { return tick_; }

 private:
  ErrorCode code_;
  long long tick_ = -1;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace melogeo
