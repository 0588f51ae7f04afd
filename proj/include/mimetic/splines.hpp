#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace mimetic {

/// Open (clamped) knot vector: end knots repeated exactly degree+1 times.
class KnotVector {
 public:
  KnotVector(std::vector<double> knots, int degree);

  /// `spans` equal knot spans on [a, b].
  static KnotVector uniform(int degree, int spans, double a = 0.0, double b = 1.0);

  int degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return knots_.size(); }
  double operator[](std::size_t i) const { return knots_[i]; }
  const std::vector<double>& knots() const noexcept { return knots_; }
  /// Number of basis functions, n+1.
  std::size_t num_basis() const noexcept { return knots_.size() - degree_ - 1; }
  double front() const noexcept { return knots_.front(); }
  double back() const noexcept { return knots_.back(); }
  bool contains(double x) const noexcept { return x >= front() && x <= back(); }
  /// Distinct knot values, i.e. element boundaries.
  std::vector<double> breakpoints() const;

 private:
  std::vector<double> knots_;
  int degree_;
};

/// Index i with knots[i] <= x < knots[i+1]; the last nonempty span for x == back().
std::size_t find_span(const KnotVector& kv, double x);

/// Values (and derivatives) of the p+1 basis functions active in one span.
/// ders[k][j] is the k-th derivative of function first + j.
struct LocalBasis {
  static constexpr int kMaxDerivs = 2;
  static constexpr int kMaxDegree = 15;
  std::size_t first = 0;
  int count = 0;
  std::array<std::array<double, kMaxDegree + 1>, kMaxDerivs + 1> ders{};
};

/// Nodal NURBS basis N_i = w_i B_i / sum_j w_j B_j. Unit weights give plain B-splines.
class Basis1D {
 public:
  explicit Basis1D(KnotVector kv);
  Basis1D(KnotVector kv, std::vector<double> weights);

  const KnotVector& knot_vector() const noexcept { return kv_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  int degree() const noexcept { return kv_.degree(); }
  std::size_t size() const noexcept { return kv_.num_basis(); }
  bool rational() const noexcept { return rational_; }

  /// Span-local values and up to `nderiv` derivatives at x.
  void eval_local(double x, int nderiv, LocalBasis& out) const;

  std::vector<double> eval_nodal(double x) const;
  std::vector<double> eval_nodal_deriv(double x) const;

 private:
  KnotVector kv_;
  std::vector<double> weights_;
  bool rational_ = false;
};

/// Edge functions M_i = -sum_{j<i} dN_j/dx, i = 1..n, stored 0-based (M_1 at index 0).
/// Each has unit integral over the parametric interval.
class EdgeBasis1D {
 public:
  explicit EdgeBasis1D(Basis1D parent);

  const Basis1D& parent() const noexcept { return parent_; }
  std::size_t size() const noexcept { return parent_.size() - 1; }

  /// The p edge functions active in the span of x; ders[0] values, ders[1] first derivatives.
  void eval_local(double x, int nderiv, LocalBasis& out) const;

  std::vector<double> eval_edge(double x) const;

 private:
  Basis1D parent_;
};

/// Free-function forms of the basis evaluations.
std::vector<double> eval_nodal(const Basis1D& basis, double x);
std::vector<double> eval_nodal_deriv(const Basis1D& basis, double x);
std::vector<double> eval_edge(const EdgeBasis1D& edge, double x);

/// Greville abscissae (knot averages); strictly increasing or ConstructionError.
std::vector<double> greville_points(const Basis1D& basis);

}  // namespace mimetic
