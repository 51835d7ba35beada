#pragma once

#include <stdexcept>
#include <string>

namespace graphdm {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid argument value (probability out of range, nonpositive scale, ...).
struct ParameterError : Error {
  using Error::Error;
};

/// Malformed or inconsistent input data (bad dataset record, mixed graph
/// sizes, metric-tag mismatch between pipeline stages, ...).
struct DataError : Error {
  using Error::Error;
};

/// Numerical failure: eigensolver non-convergence, exponent overflow,
/// degenerate eigenvalue in an extension formula.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace graphdm
