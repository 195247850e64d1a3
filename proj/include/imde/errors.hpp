#pragma once

#include <stdexcept>
#include <string>

namespace imde {

/// Malformed arguments: dimension mismatch, non-positive times, windows
/// outside a trajectory.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested quantity is only defined for some dimensions.
class UnsupportedDimension : public InputError {
 public:
  using InputError::InputError;
};

/// Evaluation at a point where the formula is undefined (u = 0 for the
/// limit field).
class SingularInput : public InputError {
 public:
  using InputError::InputError;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace imde
