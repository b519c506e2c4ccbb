#pragma once

#include <stdexcept>
#include <string>

namespace fapres {

// Mirrors fap_status in the C API one-to-one.
enum class ErrorCode {
  InvalidArgument = 1,
  AlphabetMismatch = 2,
  Malformed = 3,
  Budget = 4,
  Io = 5,
  Verification = 6,
  Internal = 7,
  NotFound = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fapres
