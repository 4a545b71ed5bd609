#include "ieegdec/error.hpp"

namespace ieegdec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNyquistViolation: return "NyquistViolation";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kEmpty: return "Empty";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooFewMinority: return "TooFewMinority";
    case ErrorCode::kTooFewTrials: return "TooFewTrials";
    case ErrorCode::kMissingChannel: return "MissingChannel";
    case ErrorCode::kSpecInvalid: return "SpecInvalid";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kContainerCorrupt: return "ContainerCorrupt";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace ieegdec
