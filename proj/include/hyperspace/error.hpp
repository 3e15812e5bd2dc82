#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperspace {

enum class ErrorCode {
  kDimMismatch,
  kBackendMismatch,
  kInvalidScalar,
  kNonFinite,
  kZeroVector,
  kEmptyMemory,
  kInvalidArgument,
  kDegenerateSpline,
  kEmptyPath,
  kTrainingDiverged,
  kUntrained,
  kFormat,
  kIo,
  kConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every library failure is reported as a hyperspace::Error carrying a code, so
// callers (and tests) can match on the failure kind rather than the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hyperspace
