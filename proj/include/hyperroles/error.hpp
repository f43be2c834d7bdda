#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperroles {

enum class ErrorCode {
  kNodeNotFound,
  kEmptyInput,
  kInvalidValue,
  kSchemaMismatch,
  kNoMatchingArchetype,
  kPrototypeUnavailable,
  kMissingFeature,
  kUndefined,
  kSpecError,
  kInputError,
  kIncidenceOverflow,
  kStageFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hyperroles
