#pragma once

#include <stdexcept>
#include <string>

namespace bohm {

/// A configuration or input value violates a documented constraint.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point lies outside the domain of a basis function (box walls) or a
/// special-function argument is out of range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// |psi|^2 fell below the node-proximity floor; the velocity field is not
/// resolvable there.
class NodeProximityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure could not produce a result (step control failure,
/// all ensemble members excluded, escape from a bounded region).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bohm
