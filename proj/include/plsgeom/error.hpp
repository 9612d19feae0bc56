#pragma once

#include <stdexcept>
#include <string>

namespace plsgeom {

// Failure taxonomy.  The first block are input-validation failures, the
// second numerical failures, then the enumeration cap, and finally the
// positivity report used by the ray construction (a conjecture violation is
// reported, never patched over).
enum class ErrorKind {
  // validation -> exit 2
  NonSymmetric,
  NotPositiveDefinite,
  RepeatedEigenvalue,
  InvalidDimension,
  DimensionMismatch,
  SubsetSizeMismatch,
  ZeroVector,
  InadmissibleSignature,
  NonPositiveWeight,
  CapExceeded,
  InvalidArgument,
  // numerical -> exit 3
  SingularKrylovSystem,
  SingularSystem,
  CrossCheckFailure,
  FdMismatch,
  StallDetected,
  NotInCone,
  InsufficientSupport,
  // -> exit 4
  EnumerationCapExceeded,
  // -> exit 5
  PositivityFailure,
};

const char* kind_name(ErrorKind k) noexcept;

// Process exit code the CLI maps this failure to.
int exit_code(ErrorKind k) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace plsgeom
