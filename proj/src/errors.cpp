#include "melogeo/errors.hpp"

namespace melogeo {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::NonZeroOrigin: return "NonZeroOrigin";
    case ErrorCode::NonMonotoneTimes: return "NonMonotoneTimes";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DurationMismatch: return "DurationMismatch";
    case ErrorCode::QueryLongerThanReference: return "QueryLongerThanReference";
    case ErrorCode::BadEpsilon: return "BadEpsilon";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::NotMidi: return "NotMidi";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::EmptyTrack: return "EmptyTrack";
    case ErrorCode::PolyphonyDetected: return "PolyphonyDetected";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

Error::Error(ErrorCode code, const std::string& message, long long tick)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message + " (tick " +
                         std::to_string(tick) + ")"),
      code_(code),
      tick_(tick) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace melogeo
