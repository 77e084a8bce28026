#pragma once

#include <stdexcept>
#include <string>

namespace phgen {

/// Evaluation outside a function's domain, at a singular point, or with a
/// nonpositive mass sample.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed generator spec or function descriptor.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Adaptive quadrature hit its depth cap before meeting the tolerance.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// Iterative eigensolver failed to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problem size exceeds the dense desk-scale budget.
class GuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace phgen
