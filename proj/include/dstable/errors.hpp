#pragma once

#include <stdexcept>
#include <string>

namespace dstable {

/// Argument outside the mathematical domain of a function (e.g. zeta at s <= 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Family or law parameters violating their stated ranges.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A callback that is not a characteristic function (e.g. cf(0) != 1).
class InvalidCfError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical target could not be met (aliasing, quadrature, inversion).
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dstable
