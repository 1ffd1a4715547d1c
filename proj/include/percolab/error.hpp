#pragma once

#include <stdexcept>
#include <string>

namespace percolab {

enum class ErrorKind {
  invalid_argument,  // malformed input, bad parameter shape
  precondition,      // a stated mathematical precondition does not hold
  size_guard,        // instance too large for an exhaustive routine
  retry_exhausted,   // randomized construction gave up
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) fail(kind, what);
}

}  // namespace percolab
