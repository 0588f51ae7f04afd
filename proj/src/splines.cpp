#include "mimetic/splines.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mimetic/errors.hpp"

namespace mimetic {

KnotVector::KnotVector(std::vector<double> knots, int degree)
    : knots_(std::move(knots)), degree_(degree) {
  if (degree_ < 0) throw ConstructionError("KnotVector: negative degree");
  if (degree_ > LocalBasis::kMaxDegree) throw ConstructionError("KnotVector: degree too large");
  const std::size_t p1 = static_cast<std::size_t>(degree_) + 1;
  if (knots_.size() < 2 * p1) throw ConstructionError("KnotVector: need at least 2(p+1) knots");
  for (double k : knots_) {
    if (!std::isfinite(k)) throw ConstructionError("KnotVector: non-finite knot");
  }
  if (!std::is_sorted(knots_.begin(), knots_.end()))
    throw ConstructionError("KnotVector: knots must be nondecreasing");
  if (!(knots_.front() < knots_.back())) throw ConstructionError("KnotVector: empty parametric range");
  for (std::size_t i = 1; i < p1; ++i) {
    if (knots_[i] != knots_.front() || knots_[knots_.size() - 1 - i] != knots_.back())
      throw ConstructionError("KnotVector: end knots must be repeated degree+1 times");
  }
  if (knots_[p1] == knots_.front() || knots_[knots_.size() - 1 - p1] == knots_.back())
    throw ConstructionError("KnotVector: end knot multiplicity exceeds degree+1");
  std::size_t run = 1;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    run = knots_[i] == knots_[i - 1] ? run + 1 : 1;
    if (run > p1) throw ConstructionError("KnotVector: interior multiplicity exceeds degree+1");
  }
}

KnotVector KnotVector::uniform(int degree, int spans, double a, double b) {
  if (spans < 1) throw ConstructionError("KnotVector::uniform: need at least one span");
  std::vector<double> knots;
  knots.reserve(2 * (degree + 1) + spans - 1);
  for (int i = 0; i <= degree; ++i) knots.push_back(a);
  for (int i = 1; i < spans; ++i) knots.push_back(a + (b - a) * i / spans);
  for (int i = 0; i <= degree; ++i) knots.push_back(b);
  return KnotVector(std::move(knots), degree);
}

std::vector<double> KnotVector::breakpoints() const {
  std::vector<double> out;
  for (double k : knots_) {
    if (out.empty() || k != out.back()) out.push_back(k);
  }
  return out;
}

std::size_t find_span(const KnotVector& kv, double x) {
  if (!kv.contains(x)) {
    std::ostringstream msg;
    msg << "find_span: x = " << x << " outside [" << kv.front() << ", " << kv.back() << "]";
    throw DomainError(msg.str());
  }
  const auto& t = kv.knots();
  const std::size_t p = kv.degree();
  const std::size_t n = kv.num_basis() - 1;
  if (x == t[n + 1]) {
    std::size_t i = n;
    while (i > p && t[i] == t[i + 1]) --i;
    return i;
  }
  // upper_bound gives the first knot > x; the span starts just before it.
  auto it = std::upper_bound(t.begin() + p, t.begin() + n + 2, x);
  return static_cast<std::size_t>(it - t.begin()) - 1;
}

namespace {

// B-spline values and derivatives on one span (Piegl & Tiller, A2.3).
void bspline_ders(const KnotVector& kv, std::size_t span, double x, int nderiv, LocalBasis& out) {
  const int p = kv.degree();
  const auto& t = kv.knots();
  constexpr int M = LocalBasis::kMaxDegree + 1;
  std::array<std::array<double, M>, M> ndu{};
  std::array<double, M> left{}, right{};
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - t[span + 1 - j];
    right[j] = t[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  out.first = span - p;
  out.count = p + 1;
  for (int j = 0; j <= p; ++j) out.ders[0][j] = ndu[j][p];
  for (int k = 1; k <= nderiv; ++k) {
    for (int j = 0; j <= p; ++j) out.ders[k][j] = 0.0;
  }
  const int nd = std::min(nderiv, p);
  if (nd == 0) return;

  std::array<std::array<double, M>, 2> a{};
  for (int r = 0; r <= p; ++r) {
    int s1 = 0;
    int s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= nd; ++k) {
      double d = 0.0;
      const int rk = r - k;
      const int pk = p - k;
      if (r >= k) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        d = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
        d += a[s2][k] * ndu[r][pk];
      }
      out.ders[k][r] = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= nd; ++k) {
    for (int j = 0; j <= p; ++j) out.ders[k][j] *= factor;
    factor *= (p - k);
  }
}

}  // namespace

Basis1D::Basis1D(KnotVector kv) : kv_(std::move(kv)), weights_(kv_.num_basis(), 1.0) {}

Basis1D::Basis1D(KnotVector kv, std::vector<double> weights)
    : kv_(std::move(kv)), weights_(std::move(weights)) {
  if (weights_.size() != kv_.num_basis())
    throw ConstructionError("Basis1D: one weight per basis function required");
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ConstructionError("Basis1D: weights must be positive");
    if (w != 1.0) rational_ = true;
  }
}

void Basis1D::eval_local(double x, int nderiv, LocalBasis& out) const {
  if (nderiv < 0 || nderiv > LocalBasis::kMaxDerivs)
    throw ArgumentError("Basis1D::eval_local: derivative order out of range");
  const std::size_t span = find_span(kv_, x);
  bspline_ders(kv_, span, x, nderiv, out);
  if (!rational_) return;

  const int p = degree();
  // Weighted sums W^(k) and Leibniz rule for the quotient.
  std::array<double, LocalBasis::kMaxDerivs + 1> W{};
  for (int k = 0; k <= nderiv; ++k) {
    for (int j = 0; j <= p; ++j) W[k] += weights_[out.first + j] * out.ders[k][j];
  }
  for (int j = 0; j <= p; ++j) {
    const double w = weights_[out.first + j];
    std::array<double, LocalBasis::kMaxDerivs + 1> R{};
    for (int k = 0; k <= nderiv; ++k) {
      double v = w * out.ders[k][j];
      double binom = 1.0;
      for (int i = 1; i <= k; ++i) {
        binom = binom * (k - i + 1) / i;
        v -= binom * W[i] * R[k - i];
      }
      R[k] = v / W[0];
    }
    for (int k = 0; k <= nderiv; ++k) out.ders[k][j] = R[k];
  }
}

std::vector<double> Basis1D::eval_nodal(double x) const {
  LocalBasis local;
  eval_local(x, 0, local);
  std::vector<double> values(size(), 0.0);
  for (int j = 0; j < local.count; ++j) values[local.first + j] = local.ders[0][j];
  return values;
}

std::vector<double> Basis1D::eval_nodal_deriv(double x) const {
  LocalBasis local;
  eval_local(x, 1, local);
  std::vector<double> values(size(), 0.0);
  for (int j = 0; j < local.count; ++j) values[local.first + j] = local.ders[1][j];
  return values;
}

EdgeBasis1D::EdgeBasis1D(Basis1D parent) : parent_(std::move(parent)) {
  if (parent_.degree() < 1) throw ConstructionError("EdgeBasis1D: nodal degree must be at least 1");
}

void EdgeBasis1D::eval_local(double x, int nderiv, LocalBasis& out) const {
  if (nderiv < 0 || nderiv > 1) throw ArgumentError("EdgeBasis1D::eval_local: derivative order out of range");
  LocalBasis nodal;
  parent_.eval_local(x, nderiv + 1, nodal);
  const int p = parent_.degree();
  // Active nodal functions are first..first+p; active edges are first..first+p-1 (0-based).
  out.first = nodal.first;
  out.count = p;
  for (int k = 0; k <= nderiv; ++k) {
    double acc = 0.0;
    for (int l = 0; l < p; ++l) {
      acc -= nodal.ders[k + 1][l];
      out.ders[k][l] = acc;
    }
  }
}

std::vector<double> EdgeBasis1D::eval_edge(double x) const {
  LocalBasis local;
  eval_local(x, 0, local);
  std::vector<double> values(size(), 0.0);
  for (int l = 0; l < local.count; ++l) values[local.first + l] = local.ders[0][l];
  return values;
}

std::vector<double> eval_nodal(const Basis1D& basis, double x) { return basis.eval_nodal(x); }
std::vector<double> eval_nodal_deriv(const Basis1D& basis, double x) { return basis.eval_nodal_deriv(x); }
std::vector<double> eval_edge(const EdgeBasis1D& edge, double x) { return edge.eval_edge(x); }

std::vector<double> greville_points(const Basis1D& basis) {
  const auto& kv = basis.knot_vector();
  const int p = kv.degree();
  if (p < 1) throw ConstructionError("greville_points: degree must be at least 1");
  std::vector<double> nodes(kv.num_basis());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double sum = 0.0;
    for (int j = 1; j <= p; ++j) sum += kv[i + j];
    nodes[i] = sum / p;
  }
  nodes.front() = kv.front();
  nodes.back() = kv.back();
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1]))
      throw ConstructionError("greville_points: repeated node (interior knot of multiplicity p+1)");
  }
  return nodes;
}

}  // namespace mimetic
