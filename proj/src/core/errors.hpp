#pragma once

#include <stdexcept>
#include <string>

namespace curvatura {

enum class ErrorKind {
  Argument,
  Capability,
  SingularChart,
  DegenerateGradient,
  Geometry,
  Config,
  Io,
};

// All failures raised by the core carry a kind so the C layer can map them
// onto status codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const char* what) {
  if (!condition) fail(kind, what);
}

}  // namespace curvatura
