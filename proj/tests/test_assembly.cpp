#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "mimetic/assembly.hpp"
#include "mimetic/errors.hpp"
#include "mimetic/quadrature.hpp"

using namespace mimetic;
using std::numbers::pi;

namespace {

// Manufactured Stokes flow on the unit square, flux-form velocity components.
double w_exact(const Point& x) { return -4 * pi * std::sin(2 * pi * x[0]) * std::sin(2 * pi * x[1]); }
double ux_exact(const Point& x) { return -std::cos(2 * pi * x[0]) * std::sin(2 * pi * x[1]); }
double uy_exact(const Point& x) { return -std::sin(2 * pi * x[0]) * std::cos(2 * pi * x[1]); }
// f = dω + δp with δp = (∂_y p, -∂_x p), p = sin(πx) sin(πy).
double fx(const Point& x) {
  return -8 * pi * pi * std::cos(2 * pi * x[0]) * std::sin(2 * pi * x[1]) + pi * std::sin(pi * x[0]) * std::cos(pi * x[1]);
}
double fy(const Point& x) {
  return -8 * pi * pi * std::sin(2 * pi * x[0]) * std::cos(2 * pi * x[1]) - pi * std::cos(pi * x[0]) * std::sin(pi * x[1]);
}
FormFunction forcing(double scale = 1.0) {
  return {1, {[scale](const Point& x) { return scale * fx(x); }, [scale](const Point& x) { return scale * fy(x); }}};
}
Eigen::Vector2d velocity_form(const Point& x) { return {ux_exact(x), uy_exact(x)}; }

double max_abs(const Eigen::SparseMatrix<double>& A) {
  double m = 0.0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

SaddleSystem manufactured_system(std::shared_ptr<const Geometry> g, int p, int spans, double nu = 1.0,
                                 double scale = 1.0) {
  auto t = fixture::uniform_tensor({p + 1, p + 1}, {spans, spans});
  auto s = assemble_vvp(t, std::move(g), nu, forcing(scale));
  apply_strong_normal_velocity(s, velocity_form);
  apply_weak_tangential_velocity(s, velocity_form);
  return s;
}

}  // namespace

TEST_CASE("mass matrix examples") {
  auto id = identity_square();
  auto t = fixture::uniform_tensor({1, 1}, {1, 1});
  const auto M0 = Eigen::MatrixXd(assemble_mass(*fixture::form_space(t, 0), *id).matrix);
  Eigen::Matrix2d hat;
  hat << 1.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3;
  Eigen::Matrix4d expected;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) expected(i, j) = hat(i % 2, j % 2) * hat(i / 2, j / 2);
  CHECK((M0 - expected).cwiseAbs().maxCoeff() < 1e-15);

  auto t2 = fixture::uniform_tensor({2, 3}, {3, 2});
  auto s0 = fixture::form_space(t2, 0);
  auto s1 = fixture::form_space(t2, 1);
  auto s2 = fixture::form_space(t2, 2);
  // Λ² products against an independent element-wise Gauss oracle of the dense basis.
  const auto M2 = Eigen::MatrixXd(assemble_mass(*s2, *id).matrix);
  const auto& rule = gauss_legendre(12);
  Eigen::MatrixXd oracle2 = Eigen::MatrixXd::Zero(s2->dimension(), s2->dimension());
  const auto bx = t2->direction(0).breakpoints(), by = t2->direction(1).breakpoints();
  for (std::size_t i = 0; i + 1 < bx.size(); ++i)
    for (std::size_t j = 0; j + 1 < by.size(); ++j)
      for (std::size_t a = 0; a < rule.size(); ++a)
        for (std::size_t b = 0; b < rule.size(); ++b) {
          const double hx = 0.5 * (bx[i + 1] - bx[i]), hy = 0.5 * (by[j + 1] - by[j]);
          const double x = bx[i] + hx * (1 + rule.points[a]), y = by[j] + hy * (1 + rule.points[b]);
          const auto ex = t2->direction(0).edge_values(x), ey = t2->direction(1).edge_values(y);
          Eigen::VectorXd v(s2->dimension());
          for (std::size_t q = 0; q < ey.size(); ++q)
            for (std::size_t r = 0; r < ex.size(); ++r) v[r + ex.size() * q] = ex[r] * ey[q];
          oracle2 += hx * hy * rule.weights[a] * rule.weights[b] * v * v.transpose();
        }
  CHECK((M2 - oracle2).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(M2.sum() == doctest::Approx(oracle2.sum()).epsilon(1e-13));

  // Scaling by 2 in both directions.
  auto sc = affine_square(2, 2);
  for (const auto& [space, factor] : {std::pair{s0, 4.0}, std::pair{s1, 1.0}, std::pair{s2, 0.25}}) {
    const auto ref = Eigen::MatrixXd(assemble_mass(*space, *id).matrix);
    const auto scaled = Eigen::MatrixXd(assemble_mass(*space, *sc).matrix);
    CHECK((scaled - factor * ref).cwiseAbs().maxCoeff() < 1e-14 * std::max(1.0, factor));
  }
}

TEST_CASE("mass matrices are symmetric positive definite and thread-order independent") {
  auto curved = curved_square();
  auto tc = build_taylor_couette();
  auto t = fixture::uniform_tensor({3, 3}, {8, 8});
  std::vector<SplineSpace1D> ann;
  std::vector<Basis1D> segs;
  for (int q = 0; q < 4; ++q) segs.emplace_back(KnotVector::uniform(2, 2, q, q + 1));
  ann.emplace_back(std::move(segs), true);
  ann.emplace_back(Basis1D(KnotVector::uniform(2, 4)));
  auto ta = std::make_shared<const TensorSpace>(std::move(ann));
  for (const auto& [tensor, geom] : {std::pair<std::shared_ptr<const TensorSpace>, const Geometry*>{t, curved.get()},
                                     std::pair<std::shared_ptr<const TensorSpace>, const Geometry*>{ta, tc.get()}}) {
    for (int k = 0; k <= 2; ++k) {
      auto s = fixture::form_space(tensor, k);
      const auto M = assemble_mass(*s, *geom);
      const auto again = assemble_mass(*s, *geom);
      const auto serial = assemble_mass_serial(*s, *geom);
      CHECK(asymmetry(M.matrix) < 1e-13);
      Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(M.matrix);
      CHECK(llt.info() == Eigen::Success);
      const Eigen::SparseMatrix<double> d0 = M.matrix - again.matrix;
      CHECK(max_abs(d0) == 0.0);
      const Eigen::SparseMatrix<double> d1 = M.matrix - serial.matrix;
      CHECK(max_abs(d1) < 1e-14 * max_abs(M.matrix));
    }
  }
}

TEST_CASE("load vector against a per-basis-function oracle") {
  auto curved = curved_square();
  auto t = fixture::uniform_tensor({3, 3}, {4, 4});
  auto s1 = fixture::form_space(t, 1);
  const auto F = assemble_load(*s1, *curved, forcing());
  const auto& rule = gauss_legendre(16);
  Eigen::VectorXd oracle = Eigen::VectorXd::Zero(s1->dimension());
  for (std::size_t i = 0; i < s1->dimension(); ++i) {
    DiscreteForm beta(s1, Eigen::VectorXd::Unit(s1->dimension(), i));
    for (int ex = 0; ex < 4; ++ex)
      for (int ey = 0; ey < 4; ++ey)
        for (std::size_t a = 0; a < rule.size(); ++a)
          for (std::size_t b = 0; b < rule.size(); ++b) {
            const Point u{(ex + 0.5 * (1 + rule.points[a])) / 4, (ey + 0.5 * (1 + rule.points[b])) / 4, 0};
            const auto phys = pushforward_components(1, *curved, u, eval(beta, u));
            const auto X = curved->map_point(u);
            const Point px{X[0], X[1], 0};
            const double det = curved->jacobian(u).determinant();
            oracle[i] += rule.weights[a] * rule.weights[b] / 64 * (phys[0] * fx(px) + phys[1] * fy(px)) * det;
          }
  }
  CHECK((F - oracle).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("saddle system properties") {
  auto id = identity_square();
  auto curved = curved_square();
  for (const auto& g : {std::shared_ptr<const Geometry>(id), std::shared_ptr<const Geometry>(curved)}) {
    auto s = manufactured_system(g, 2, 4);
    CHECK(asymmetry(s.matrix) < 1e-12);
    CHECK(s.gauge);
  }

  SUBCASE("zero data gives the zero solution") {
    auto t = fixture::uniform_tensor({3, 3}, {4, 4});
    auto s = assemble_vvp(t, id, 1.0, {1, {[](const Point&) { return 0.0; }, [](const Point&) { return 0.0; }}});
    const BoundaryField zero = [](const Point&) { return Eigen::Vector2d::Zero(); };
    apply_strong_normal_velocity(s, zero);
    CHECK(tangential_boundary_vector(s, zero).cwiseAbs().maxCoeff() == 0.0);
    apply_weak_tangential_velocity(s, zero);
    const auto sol = solve(s);
    CHECK(sol.omega.cwiseAbs().maxCoeff() == 0.0);
    CHECK(sol.u.cwiseAbs().maxCoeff() == 0.0);
    CHECK(sol.p.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("manufactured flow is discretely divergence free") {
    auto s = manufactured_system(id, 2, 8);
    const auto sol = solve(s);
    CHECK(sol.residual < 1e-10);
    CHECK((s.D21 * sol.u).cwiseAbs().maxCoeff() < 1e-12);
    // Boundary coefficients reproduce the exact line integrals along each boundary edge.
    const auto& dx = s.space1->tensor().direction(0);
    DiscreteForm uh(s.space1, sol.u);
    const auto& rule = gauss_legendre(12);
    for (const auto& [lo, hi] : dx.edges()) {
      double integral = 0.0;
      std::vector<double> cuts{lo};
      for (double c : dx.breakpoints())
        if (c > lo && c < hi) cuts.push_back(c);
      cuts.push_back(hi);
      for (std::size_t p = 0; p + 1 < cuts.size(); ++p)
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const double h = 0.5 * (cuts[p + 1] - cuts[p]);
          integral += h * rule.weights[q] * eval(uh, {cuts[p] + h * (1 + rule.points[q]), 1.0, 0})[0];
        }
      const double exact = 0.0;  // u_x vanishes on y = 1
      CHECK(std::abs(integral - exact) < 1e-12);
    }
  }

  SUBCASE("viscosity scaling") {
    const auto base = solve(manufactured_system(id, 1, 4, 1.0, 1.0));
    const auto scaled = solve(manufactured_system(id, 1, 4, 10.0, 10.0));
    CHECK((scaled.omega - base.omega).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((scaled.u - base.u).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((scaled.p - 10.0 * base.p).cwiseAbs().maxCoeff() < 1e-9);
  }

  SUBCASE("gauge invariance") {
    auto s = manufactured_system(id, 1, 4);
    const auto sol = solve(s);
    Eigen::VectorXd x(s.size());
    x << sol.omega, sol.u, sol.p;
    // Cochain of the constant pressure 3 (not an all-equal cochain: Σ M_i is not constant).
    const auto c = project_form({2, {[](const Point&) { return 3.0; }}}, s.space2);
    Eigen::VectorXd shifted = x;
    shifted.tail(s.n2()) += c.coeffs();
    const Eigen::VectorXd r0 = s.matrix * x - s.rhs, r1 = s.matrix * shifted - s.rhs;
    // Momentum rows of interior velocity unknowns do not see a constant pressure.
    for (std::size_t i = s.n0(); i < s.n0() + s.n1(); ++i)
      if (!s.constrained[i]) CHECK(std::abs(r1[i] - r0[i]) < 1e-10);
    CHECK(std::abs(shifted.tail(s.n2()).sum() - sol.p.sum() - 3.0) < 1e-12);  // gauge row: ∫ p over the unit square
  }
}

TEST_CASE("boundary conditions") {
  auto id = identity_square();
  auto t = fixture::uniform_tensor({3, 3}, {9, 9});
  auto s = assemble_vvp(t, id, 1.0, {1, {[](const Point&) { return 0.0; }, [](const Point&) { return 0.0; }}});
  const BoundaryField lid = [](const Point& x) {
    return Eigen::Vector2d(0.0, x[1] > 1.0 - 1e-9 ? 1.0 : 0.0);
  };
  const auto dofs = normal_velocity_dofs(s, lid);
  CHECK(dofs.size() == 4 * t->direction(0).num_edges());
  for (const auto& [i, v] : dofs) CHECK(v == 0.0);
  const auto b1 = tangential_boundary_vector(s, lid);
  const auto& c = t->complex();
  for (std::size_t j = 0; j < c.points(1); ++j)
    for (std::size_t i = 0; i < c.points(0); ++i) {
      const double v = b1[c.index(0, 0, {i, j, 0})];
      if (j + 1 < c.points(1))
        CHECK(v == 0.0);
      else
        CHECK(v > 0.0);
    }
  CHECK(b1.sum() == doctest::Approx(1.0).epsilon(1e-13));  // ∮ a·n ds over the lid

  // Net outflow through the right side only.
  const BoundaryField leak = [](const Point& x) { return Eigen::Vector2d(0.0, x[0]); };
  CHECK_THROWS_AS(apply_strong_normal_velocity(s, leak), FluxImbalanceError);
  try {
    apply_strong_normal_velocity(s, leak);
  } catch (const FluxImbalanceError& e) {
    CHECK(std::abs(e.imbalance()) == doctest::Approx(1.0).epsilon(1e-12));
  }
}
