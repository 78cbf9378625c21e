#pragma once

#include <stdexcept>
#include <string>

namespace fracdim {

/// Argument outside the mathematical domain of an operation (x <= 0 for
/// gamma, evaluation point outside the rectangle, a = 0 for Hadamard, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed configuration: bad order, bad rho, bad node count, bad
/// surface parameters, misaligned box grid.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace fracdim
