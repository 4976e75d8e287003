#pragma once

#include <stdexcept>
#include <string>

namespace pbl {

// Precondition violations (bad dimensions, k out of range, ...) are reported
// with std::invalid_argument; points on or outside the boundary of a model
// with std::domain_error. The two types below cover numerical failures.

/// An iterative method (quadrature, optimizer, truncation) did not converge
/// within its budget.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A lattice enumeration could not be certified complete within its point
/// budget. `lower_bound()` is the count found in the part of the box that was
/// enumerated, which is a valid lower bound on the true count.
class CertificationError : public NumericalError {
 public:
  CertificationError(const std::string& what, long long lower_bound)
      : NumericalError(what), lower_bound_(lower_bound) {}

  long long lower_bound() const noexcept { return lower_bound_; }

 private:
  long long lower_bound_;
};

}  // namespace pbl
