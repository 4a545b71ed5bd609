#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ieegdec {

enum class ErrorCode {
  kInvalidArgument,
  kNyquistViolation,
  kTooShort,
  kEmpty,
  kOutOfBounds,
  kNonFinite,
  kSingleClass,
  kShapeMismatch,
  kLengthMismatch,
  kTooFewMinority,
  kTooFewTrials,
  kMissingChannel,
  kSpecInvalid,
  kConfigInvalid,
  kContainerCorrupt,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every error raised by the library carries a machine-readable code and the
// module that raised it, so the CLI can emit a structured error object.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string module, const std::string& message)
      : std::runtime_error(message), code_(code), module_(std::move(module)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorCode code_;
  std::string module_;
};

}  // namespace ieegdec
