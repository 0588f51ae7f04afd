#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <functional>
#include <utility>
#include <vector>

#include "mimetic/spaces.hpp"
#include "mimetic/splines.hpp"
#include "mimetic/topology.hpp"
#include "mimetic/univariate.hpp"

namespace mimetic {

using ScalarFunction = std::function<double(const Point&)>;

/// A k-form given by its components, one per block of the target space in block order.
struct FormFunction {
  int k = 0;
  std::vector<ScalarFunction> components;
};

enum class ReductionKind { node_values, edge_integrals, face_integrals, volume_integrals };

struct ReducedCochain {
  Cochain cochain;
  ReductionKind kind;
};

ReductionKind reduction_kind(int k);

ReducedCochain reduce_0form(const ScalarFunction& f, const std::vector<Point>& nodes);
/// Gauss points per knot span used by reductions, at least degree + 1.
inline constexpr int kReductionMinPoints = 8;

/// Line integrals of f over each interval, split at the breakpoints, with
/// max(degree + 1, kReductionMinPoints) Gauss points per piece.
ReducedCochain reduce_1form(const std::function<double(double)>& f,
                            const std::vector<std::pair<double, double>>& edges,
                            const std::vector<double>& breakpoints, int degree,
                            int min_points = kReductionMinPoints);
/// de Rham map onto the cells of a form space: point values, and integrals over
/// the products of histopolation intervals along the block's axes.
ReducedCochain reduce(const FormFunction& f, const DiscreteFormSpace& space, int min_points = kReductionMinPoints);

/// Square change-of-basis matrix with its LU factorization.
class ChangeOfBasis {
 public:
  explicit ChangeOfBasis(Eigen::MatrixXd matrix);

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  Eigen::Index size() const noexcept { return matrix_.rows(); }
  /// Reciprocal of the LU reciprocal-condition estimate.
  double condition_estimate() const noexcept { return condition_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

  static constexpr double kMaxCondition = 1e12;

 private:
  Eigen::MatrixXd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double condition_ = 0.0;
};

/// N_ij = N_j(node_i).
ChangeOfBasis build_interpolation(const Basis1D& basis, const std::vector<double>& nodes);
/// M_ij = ∫_{e_i} M_j. Since M_j = Σ_{l>=j} N_l' the integral telescopes to nodal
/// values at the interval ends, which is exact for rational bases too.
ChangeOfBasis build_histopolation(const EdgeBasis1D& edge, const std::vector<std::pair<double, double>>& edges);

ChangeOfBasis build_interpolation(const SplineSpace1D& space);
ChangeOfBasis build_histopolation(const SplineSpace1D& space);

/// Coefficients from a reduced cochain: per-direction solves, F^{-1} R f.
Eigen::VectorXd solve_change_of_basis(const DiscreteFormSpace& space, const Eigen::VectorXd& reduced);

DiscreteForm project_form(const FormFunction& f, std::shared_ptr<const DiscreteFormSpace> space,
                          int min_points = kReductionMinPoints);

/// The reconstruction of a discrete form as a FormFunction (for re-projection).
FormFunction as_function(const DiscreteForm& form);

}  // namespace mimetic
