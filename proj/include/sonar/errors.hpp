#pragma once

#include <stdexcept>

namespace sonar {

/// Malformed or mismatched on-disk data (library files, signals, reports).
struct DataFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Solver/numerics failure (singular system, non-finite solution, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sonar
