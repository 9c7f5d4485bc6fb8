#pragma once

#include <stdexcept>
#include <string>

namespace gnls {

// Invalid user input: bad grid parameters, malformed config, mismatched grids.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// e^{sigma|xi|} would exceed the double-precision safety margin on the lattice.
class MultiplierOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// NaN/Inf encountered in a field or mid-computation.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gnls
