#pragma once
/// Error taxonomy for the library.
///
/// Two families map onto the CLI exit codes: ValidationError (bad inputs or
/// preconditions, exit 2) and NumericalError (a computation that started from
/// valid inputs failed to produce a trustworthy result, exit 3). Each carries a
/// machine-readable code naming the failing contract.

#include <stdexcept>
#include <string>

namespace fracshape {

enum class ErrorCode {
  // geometry
  InvalidCurve,
  AmbiguousProjection,
  NoIntersection,
  StarShapeLost,
  OutOfBand,
  // quadrature / kernel
  QuadratureNotConverged,
  // assembly / solver
  AssemblyFailed,
  NotPositiveDefinite,
  // trace
  IllConditionedFit,
  DegenerateProfile,
  // optimizer
  LineSearchFailed,
  // symmetry
  EmptyCap,
  SignChange,
  // io / cli
  InvalidConfig,
  IoFailure,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

/// Bad inputs, violated preconditions, malformed files. CLI exit code 2.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Valid inputs but the numerics failed (non-convergence, lost positivity,
/// degenerate fits...). CLI exit code 3.
class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace fracshape
