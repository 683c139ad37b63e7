#include "snw/error.hpp"

namespace snw {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::OverlapViolation: return "OverlapViolation";
    case ErrorCode::SearchFailed: return "SearchFailed";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::InvalidRotation: return "InvalidRotation";
    case ErrorCode::NoFrames: return "NoFrames";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace snw
