#pragma once

#include <stdexcept>
#include <string>

namespace entcert {

enum class ErrorKind {
  InvalidInput,
  NotPSD,
  InternalError,
  NotInvariant,
  InfiniteRelativeEntropy,
  NoFiniteBound,
  MeanNotMaximallyMixed,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the separable square-root measurement when the mean of the
// closest product states is not I/D. Carries the operator-norm deviation so
// callers can fall back to the upper bound alone.
class MeanNotMaximallyMixed : public Error {
 public:
  explicit MeanNotMaximallyMixed(double deviation);

  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::InvalidInput, what);
}

}  // namespace entcert
