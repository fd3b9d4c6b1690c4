#pragma once

#include <stdexcept>
#include <string>

namespace ampload {

enum class ErrorCode {
  InvalidArgument = 1,
  Structural,
  Resource,
  Unsupported,
  Config,
  Domain,
  Numeric,
  Solver,
  Precondition,
  Normalization,
  Degenerate,
  Io,
};

/// Base exception for every failure raised by the library. The C API maps
/// `code()` one-to-one onto `ampload_status`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Thrown by the phase solver when it gives up; carries the best error seen.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double best_error)
      : Error(ErrorCode::Solver, what), best_error_(best_error) {}
  double best_error() const noexcept { return best_error_; }

 private:
  double best_error_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace ampload
