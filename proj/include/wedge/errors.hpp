#pragma once

#include <stdexcept>

namespace wedge {

// Argument outside an operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Trial parameters on a boundary where |ψ|² has no finite integral.
class NonNormalizableError : public DomainError {
 public:
  using DomainError::DomainError;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OptimizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wedge
