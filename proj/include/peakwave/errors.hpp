#pragma once

#include <stdexcept>
#include <string>

namespace peakwave {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative method exhausted its budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoRootError : public std::runtime_error {
 public:
  NoRootError(const std::string& what, double lo, double hi, double f_lo, double f_hi)
      : std::runtime_error(what), lo(lo), hi(hi), f_lo(f_lo), f_hi(f_hi) {}
  double lo, hi, f_lo, f_hi;
};

/// The coefficient c^2 - 2 eta of the Hessian vanished somewhere.
class DegenerateCoefficientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Characteristic positions lost monotonicity.
class CrossingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace peakwave
