#pragma once

#include <stdexcept>
#include <string>

namespace rkcond {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text (mesh files, tableau blocks, config files).
struct ParseError : Error {
  using Error::Error;
};

/// Inconsistent mesh connectivity: out-of-range indices, zero or negative
/// element volumes, inverted elements after a coordinate map.
struct TopologyError : Error {
  using Error::Error;
};

/// Invalid run configuration (unknown names, empty sweeps, bad parameters).
struct ConfigError : Error {
  using Error::Error;
};

/// Numerical failure: loss of positive definiteness, singular factorization,
/// defective coefficient matrix, time step beyond the positivity threshold.
struct NumericalError : Error {
  using Error::Error;
};

/// An iterative method exhausted its budget; carries the achieved residual.
struct ConvergenceError : NumericalError {
  ConvergenceError(const std::string& what, double residual)
      : NumericalError(what), achieved_residual(residual) {}
  double achieved_residual;
};

}  // namespace rkcond
