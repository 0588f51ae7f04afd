#include "mimetic/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mimetic/errors.hpp"
#include "mimetic/quadrature.hpp"

namespace mimetic {

double checked_det(const Eigen::Matrix2d& J) {
  const double det = J.determinant();
  if (!(det > 0.0)) {
    std::ostringstream msg;
    msg << "non-positive Jacobian determinant " << det;
    throw DegenerateGeometryError(msg.str());
  }
  return det;
}

NurbsPatch::NurbsPatch(KnotVector u, KnotVector v, std::vector<Eigen::Vector2d> control, std::vector<double> weights)
    : u_(std::move(u)), v_(std::move(v)), control_(std::move(control)), weights_(std::move(weights)) {
  const std::size_t n = u_.size() * v_.size();
  if (control_.size() != n) throw ConstructionError("NurbsPatch: control grid does not match the knot vectors");
  if (weights_.empty()) weights_.assign(n, 1.0);
  if (weights_.size() != n) throw ConstructionError("NurbsPatch: one weight per control point");
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w)) throw ConstructionError("NurbsPatch: weights must be positive");
  // Orientation check at interior Gauss points of every element.
  const auto& rule = gauss_legendre(4);
  const auto bu = breakpoints(0), bv = breakpoints(1);
  for (std::size_t i = 0; i + 1 < bu.size(); ++i)
    for (std::size_t j = 0; j + 1 < bv.size(); ++j)
      for (double qu : rule.points)
        for (double qv : rule.points) {
          const Point p{0.5 * (bu[i] + bu[i + 1]) + 0.5 * (bu[i + 1] - bu[i]) * qu,
                        0.5 * (bv[j] + bv[j + 1]) + 0.5 * (bv[j + 1] - bv[j]) * qv, 0.0};
          checked_det(jacobian(p));
        }
}

void NurbsPatch::evaluate(const Point& u, Eigen::Vector2d& x, Eigen::Matrix2d* J) const {
  LocalBasis bu, bv;
  u_.eval_local(u[0], J ? 1 : 0, bu);
  v_.eval_local(u[1], J ? 1 : 0, bv);
  double W = 0.0, Wu = 0.0, Wv = 0.0;
  Eigen::Vector2d A = Eigen::Vector2d::Zero(), Au = A, Av = A;
  for (int b = 0; b < bv.count; ++b) {
    for (int a = 0; a < bu.count; ++a) {
      const std::size_t i = bu.first + a, j = bv.first + b;
      const double w = weight(i, j);
      const Eigen::Vector2d& P = control_point(i, j);
      const double N = bu.ders[0][a] * bv.ders[0][b];
      W += w * N;
      A += w * N * P;
      if (J) {
        const double Nu = bu.ders[1][a] * bv.ders[0][b];
        const double Nv = bu.ders[0][a] * bv.ders[1][b];
        Wu += w * Nu;
        Wv += w * Nv;
        Au += w * Nu * P;
        Av += w * Nv * P;
      }
    }
  }
  x = A / W;
  if (J) {
    J->col(0) = (Au - Wu * x) / W;
    J->col(1) = (Av - Wv * x) / W;
  }
}

Eigen::Vector2d NurbsPatch::map_point(const Point& u) const {
  Eigen::Vector2d x;
  evaluate(u, x, nullptr);
  return x;
}

Eigen::Matrix2d NurbsPatch::jacobian(const Point& u) const {
  Eigen::Vector2d x;
  Eigen::Matrix2d J;
  evaluate(u, x, &J);
  return J;
}

std::vector<double> NurbsPatch::breakpoints(int axis) const { return knot_vector(axis).breakpoints(); }

namespace {

// Patch-local parameter of a side at fraction s in [0, 1].
Point side_point(const NurbsPatch& p, Side side, double s) {
  const auto& ku = p.knot_vector(0);
  const auto& kv = p.knot_vector(1);
  const double u = ku.front() + s * (ku.back() - ku.front());
  const double v = kv.front() + s * (kv.back() - kv.front());
  switch (side) {
    case Side::u_lo:
      return {ku.front(), v, 0};
    case Side::u_hi:
      return {ku.back(), v, 0};
    case Side::v_lo:
      return {u, kv.front(), 0};
    default:
      return {u, kv.back(), 0};
  }
}

}  // namespace

MultiPatch::MultiPatch(std::vector<NurbsPatch> patches, std::vector<Interface> interfaces)
    : patches_(std::move(patches)), interfaces_(std::move(interfaces)) {
  if (patches_.empty()) throw ConstructionError("MultiPatch: no patches");
  for (const auto& f : interfaces_) {
    if (f.patch_a >= patches_.size() || f.patch_b >= patches_.size())
      throw ConstructionError("MultiPatch: interface refers to a missing patch");
    for (int i = 0; i <= 20; ++i) {
      const double s = i / 20.0;
      const auto xa = patches_[f.patch_a].map_point(side_point(patches_[f.patch_a], f.side_a, s));
      const auto xb = patches_[f.patch_b].map_point(side_point(patches_[f.patch_b], f.side_b, f.reversed ? 1.0 - s : s));
      if ((xa - xb).norm() > 1e-12) throw ConstructionError("MultiPatch: interface sides do not coincide");
    }
  }
}

std::pair<std::size_t, Point> MultiPatch::locate(const Point& u) const {
  const double P = static_cast<double>(patches_.size());
  if (u[0] < 0.0 || u[0] > P || u[1] < 0.0 || u[1] > 1.0) throw DomainError("MultiPatch: parameter out of range");
  const std::size_t q = std::min(static_cast<std::size_t>(u[0]), patches_.size() - 1);
  const auto& p = patches_[q];
  const auto& ku = p.knot_vector(0);
  const auto& kv = p.knot_vector(1);
  const double s = std::min(1.0, u[0] - static_cast<double>(q));
  return {q, Point{ku.front() + s * (ku.back() - ku.front()), kv.front() + u[1] * (kv.back() - kv.front()), 0.0}};
}

Eigen::Vector2d MultiPatch::map_point(const Point& u) const {
  const auto [q, local] = locate(u);
  return patches_[q].map_point(local);
}

Eigen::Matrix2d MultiPatch::jacobian(const Point& u) const {
  const auto [q, local] = locate(u);
  const auto& p = patches_[q];
  Eigen::Matrix2d J = p.jacobian(local);
  J.col(0) *= p.knot_vector(0).back() - p.knot_vector(0).front();
  J.col(1) *= p.knot_vector(1).back() - p.knot_vector(1).front();
  return J;
}

std::vector<double> MultiPatch::breakpoints(int axis) const {
  std::vector<double> out;
  if (axis == 0) {
    for (std::size_t q = 0; q < patches_.size(); ++q) {
      const auto& kv = patches_[q].knot_vector(0);
      for (double b : kv.breakpoints()) {
        const double g = q + (b - kv.front()) / (kv.back() - kv.front());
        if (out.empty() || g > out.back()) out.push_back(g);
      }
    }
    return out;
  }
  const auto& kv = patches_[0].knot_vector(1);
  for (double b : kv.breakpoints()) out.push_back((b - kv.front()) / (kv.back() - kv.front()));
  return out;
}

int MultiPatch::degree(int axis) const {
  int p = 0;
  for (const auto& patch : patches_) p = std::max(p, patch.degree(axis));
  return p;
}

std::shared_ptr<NurbsPatch> identity_square() { return affine_square(1.0, 1.0); }

std::shared_ptr<NurbsPatch> affine_square(double sx, double sy) {
  std::vector<Eigen::Vector2d> cp{{0, 0}, {sx, 0}, {0, sy}, {sx, sy}};
  return std::make_shared<NurbsPatch>(KnotVector::uniform(1, 1), KnotVector::uniform(1, 1), std::move(cp));
}

std::shared_ptr<NurbsPatch> curved_square(double amplitude, int spans, int degree) {
  const auto kv = KnotVector::uniform(degree, spans);
  const auto g = greville_points(Basis1D(kv));
  std::vector<Eigen::Vector2d> cp;
  for (double v : g) {
    for (double u : g) {
      const double s = amplitude * std::sin(2 * std::numbers::pi * u) * std::sin(2 * std::numbers::pi * v);
      cp.emplace_back(u + s, v + s);
    }
  }
  return std::make_shared<NurbsPatch>(kv, kv, std::move(cp));
}

NurbsPatch quarter_annulus(int q, double r_in, double r_out) {
  // Arc from angle θ0 to θ0 - π/2 as a rational quadratic with middle weight √2/2.
  const double t0 = -q * std::numbers::pi / 2;
  const double t1 = t0 - std::numbers::pi / 2;
  const Eigen::Vector2d a(std::cos(t0), std::sin(t0)), b(std::cos(t1), std::sin(t1));
  const Eigen::Vector2d corner = a + b;  // intersection of the end tangents on the unit circle
  const std::array<Eigen::Vector2d, 3> unit{a, corner, b};
  const std::array<double, 3> w{1.0, std::sqrt(0.5), 1.0};
  std::vector<Eigen::Vector2d> cp;
  std::vector<double> weights;
  for (double r : {r_in, r_out}) {
    for (int i = 0; i < 3; ++i) {
      cp.push_back(r * unit[i]);
      weights.push_back(w[i]);
    }
  }
  return NurbsPatch(KnotVector({0, 0, 0, 1, 1, 1}, 2), KnotVector::uniform(1, 1), std::move(cp), std::move(weights));
}

std::shared_ptr<MultiPatch> build_taylor_couette(double r_in, double r_out) {
  std::vector<NurbsPatch> patches;
  std::vector<Interface> interfaces;
  for (int q = 0; q < 4; ++q) {
    patches.push_back(quarter_annulus(q, r_in, r_out));
    interfaces.push_back({static_cast<std::size_t>(q), Side::u_hi, static_cast<std::size_t>((q + 1) % 4), Side::u_lo});
  }
  return std::make_shared<MultiPatch>(std::move(patches), std::move(interfaces));
}

std::vector<double> pullback_components(int k, const Geometry& g, const Point& u, const std::vector<double>& phys) {
  switch (k) {
    case 0:
      return phys;
    case 1: {
      const Eigen::Matrix2d J = g.jacobian(u);
      checked_det(J);
      const Eigen::Vector2d r = J.transpose() * Eigen::Vector2d(phys.at(0), phys.at(1));
      return {r[0], r[1]};
    }
    case 2:
      return {phys.at(0) * checked_det(g.jacobian(u))};
    default:
      throw ArgumentError("pullback_components: form degree must be 0, 1 or 2");
  }
}

std::vector<double> pushforward_components(int k, const Geometry& g, const Point& u, const std::vector<double>& ref) {
  switch (k) {
    case 0:
      return ref;
    case 1: {
      const Eigen::Matrix2d J = g.jacobian(u);
      checked_det(J);
      const Eigen::Vector2d a = J.transpose().partialPivLu().solve(Eigen::Vector2d(ref.at(0), ref.at(1)));
      return {a[0], a[1]};
    }
    case 2:
      return {ref.at(0) / checked_det(g.jacobian(u))};
    default:
      throw ArgumentError("pushforward_components: form degree must be 0, 1 or 2");
  }
}

FormFunction pullback(const FormFunction& physical, const Geometry& g) {
  const int k = physical.k;
  if (k < 0 || k > 2) throw ArgumentError("pullback: form degree must be 0, 1 or 2");
  const std::size_t n = physical.components.size();
  if (n != (k == 1 ? 2u : 1u)) throw ArgumentError("pullback: wrong number of components");
  const Geometry* geo = &g;
  auto all = [physical, geo, k](const Point& u) {
    const Eigen::Vector2d x = geo->map_point(u);
    const Point px{x[0], x[1], 0.0};
    std::vector<double> phys;
    for (const auto& c : physical.components) phys.push_back(c(px));
    return pullback_components(k, *geo, u, phys);
  };
  FormFunction out{k, {}};
  for (std::size_t c = 0; c < n; ++c) out.components.push_back([all, c](const Point& u) { return all(u)[c]; });
  return out;
}

}  // namespace mimetic
