#pragma once

#include <stdexcept>
#include <string>

namespace mimetic {

/// Evaluation point outside the parametric domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid knot vector, weights, nodes or other construction input.
class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mismatched dimensions or out-of-range arguments.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for failures of the numerics themselves (harness exit code 1).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Change-of-basis matrix singular to working precision.
class IllPosedNodesError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Non-positive Jacobian determinant.
class DegenerateGeometryError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularSystemError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Prescribed normal fluxes of an enclosed flow do not sum to zero.
class FluxImbalanceError : public NumericalError {
 public:
  FluxImbalanceError(const std::string& what, double imbalance)
      : NumericalError(what), imbalance_(imbalance) {}
  double imbalance() const noexcept { return imbalance_; }

 private:
  double imbalance_;
};

}  // namespace mimetic
