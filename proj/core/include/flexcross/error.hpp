#pragma once

#include <stdexcept>
#include <string>

namespace flexcross {

enum class ErrorCode {
  input,
  invalid_point,
  not_timelike,
  invalid_data,
  degenerate_data,
  inconsistent_signs,
  unsupported,
  degeneracy,
  indeterminate,
  concurrency_failure,
  classification,
  not_applicable,
  pole,
  io,
};

const char* to_string(ErrorCode code);

// Every failure in the library surfaces as this one exception type; callers
// dispatch on code() rather than on a class hierarchy.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}
  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace flexcross
