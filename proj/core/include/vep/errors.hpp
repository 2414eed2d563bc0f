#pragma once

#include <stdexcept>
#include <string>

namespace vep {

/// Base class for all vepflow errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad numeric argument (exponent < 1, step <= 0, exponent out of range, ...).
struct InvalidArgumentError : Error {
  using Error::Error;
};

/// Operands live on different grids or have incompatible ranks.
struct ShapeError : Error {
  using Error::Error;
};

/// An input violates a documented structural precondition
/// (non-skew rotation tensor, non-deviatoric stress, infeasible point).
struct ContractViolationError : Error {
  using Error::Error;
};

/// Time arguments out of order, or a sweep list not decreasing.
struct OrderingError : Error {
  using Error::Error;
};

/// A diagnostics quadrature was asked for data the trajectory does not hold.
struct InsufficientDataError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

/// Advective CFL bound exceeded; the step must be rejected.
struct CflViolationError : Error {
  CflViolationError(const std::string& msg, double suggested)
      : Error(msg), suggested_dt(suggested) {}
  double suggested_dt;
};

/// Solution left the trusted range (NaN or velocity above the abort threshold).
struct BlowUpError : Error {
  BlowUpError(const std::string& msg, double time) : Error(msg), t(time) {}
  double t;
};

}  // namespace vep
