#pragma once

#include <stdexcept>
#include <string>

namespace dpskit {

enum class ErrorCode {
  invalid_argument,
  parse_error,
  budget_exceeded,
  solver_failure,
  not_ppt,
  internal,
};

/// Single exception type for the library. The code survives the C boundary
/// as an integer status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::invalid_argument, what);
}

}  // namespace dpskit
