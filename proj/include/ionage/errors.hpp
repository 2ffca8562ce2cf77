#pragma once

#include <stdexcept>
#include <string>

namespace ionage {

/// Base class for all errors thrown by the library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad arguments, violated preconditions, or invariant violations. CLI exit code 1.
struct validation_error : error {
  using error::error;
};

/// Incompatible dimension classes in a unit conversion. CLI exit code 1.
struct dimension_error : validation_error {
  using validation_error::validation_error;
};

/// Malformed input file (registry, config). CLI exit code 1.
struct parse_error : error {
  using error::error;
};

/// Filesystem failure (missing file, unwritable path). CLI exit code 2.
struct io_error : error {
  using error::error;
};

/// Numerical failure: integration instability, singular normal equations. CLI exit code 3.
struct numerical_error : error {
  using error::error;
};

}  // namespace ionage
