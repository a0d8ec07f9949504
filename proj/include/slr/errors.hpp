#pragma once

#include <stdexcept>
#include <string>

namespace slr {

/// Rejected input: invalid tiling parameters, out-of-domain arguments.
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A solver, integrator or quadrature failed to reach its tolerance.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slr
