#pragma once

#include <stdexcept>
#include <string>

namespace debate {

/// Diagnostic classes; the numeric value doubles as the CLI exit status.
enum class ErrorCode : int {
  usage = 2,
  parse = 3,
  validation = 4,
  precondition = 5,
  strategy = 6,
  limit = 7,
  io = 8,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace debate
