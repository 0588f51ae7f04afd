#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "adjointness.hpp"
#include "fixtures.hpp"
#include "mimetic/errors.hpp"
#include "mimetic/geometry.hpp"
#include "mimetic/quadrature.hpp"
#include "pullback_oracle.hpp"

using namespace mimetic;
using std::numbers::pi;

TEST_CASE("map_point and jacobian") {
  const auto id = identity_square();
  CHECK((id->map_point({0.3, 0.7, 0}) - Eigen::Vector2d(0.3, 0.7)).norm() < 1e-15);
  CHECK((id->jacobian({0.3, 0.7, 0}) - Eigen::Matrix2d::Identity()).norm() < 1e-15);
  const auto aff = affine_square(2, 3);
  CHECK((aff->jacobian({0.1, 0.9, 0}) - Eigen::Vector2d(2, 3).asDiagonal().toDenseMatrix()).norm() < 1e-15);

  const auto quarter = quarter_annulus(0);
  CHECK((quarter.map_point({0, 0, 0}) - Eigen::Vector2d(1, 0)).norm() < 1e-15);
  CHECK(quarter.map_point({0.5, 0, 0}).norm() == doctest::Approx(1.0).epsilon(1e-12));

  const auto curved = curved_square();
  std::mt19937 rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto u = fixture::random_point(2, rng);
    const auto J = curved->jacobian(u);
    const double h = 1e-6;
    for (int a = 0; a < 2; ++a) {
      Point up = u, um = u;
      up[a] += h;
      um[a] -= h;
      const Eigen::Vector2d fd = (curved->map_point(up) - curved->map_point(um)) / (2 * h);
      CHECK((fd - J.col(a)).norm() <= 1e-6 * J.col(a).norm() + 1e-9);
    }
  }
  // A control net folded over itself is rejected.
  std::vector<Eigen::Vector2d> folded{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK_THROWS_AS(NurbsPatch(KnotVector::uniform(1, 1), KnotVector::uniform(1, 1), folded), DegenerateGeometryError);
  CHECK_THROWS_AS(NurbsPatch(KnotVector::uniform(1, 1), KnotVector::uniform(1, 1), {{0, 0}}), ConstructionError);
}

TEST_CASE("pullback_components examples") {
  const auto aff = affine_square(2, 3);
  CHECK(pullback_components(0, *aff, {0.2, 0.2, 0}, {4.5}) == std::vector<double>{4.5});
  CHECK(pullback_components(2, *aff, {0.2, 0.2, 0}, {1.0})[0] == doctest::Approx(6.0));
  const auto r = pullback_components(1, *aff, {0.2, 0.2, 0}, {1.0, 1.0});
  CHECK(r[0] == doctest::Approx(2.0));
  CHECK(r[1] == doctest::Approx(3.0));
  const auto back = pushforward_components(1, *aff, {0.2, 0.2, 0}, r);
  CHECK(back[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(pullback_components(3, *aff, {0, 0, 0}, {1.0}), ArgumentError);
}

TEST_CASE("Taylor-Couette annulus") {
  const auto tc = build_taylor_couette();
  CHECK(tc->patches().size() == 4);
  for (std::size_t q = 0; q < 4; ++q) {
    const auto& p = tc->patches()[q];
    CHECK(p.weight(0, 0) == 1.0);
    CHECK(p.weight(1, 0) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
    CHECK(p.weight(2, 0) == 1.0);
    for (int i = 0; i < 100; ++i) {
      const double s = i / 99.0;
      CHECK(std::abs(p.map_point({s, 0, 0}).norm() - 1.0) < 1e-13);
      CHECK(std::abs(p.map_point({s, 1, 0}).norm() - 2.0) < 1e-13);
    }
    const auto& next = tc->patches()[(q + 1) % 4];
    for (int i = 0; i <= 10; ++i)
      CHECK((p.map_point({1, i / 10.0, 0}) - next.map_point({0, i / 10.0, 0})).norm() < 1e-13);
  }
  // Global parametrization, positive orientation, and r = 1 + v along the radial direction.
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> U(0.0, 4.0), V(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Point u{U(rng), V(rng), 0};
    CHECK(checked_det(tc->jacobian(u)) > 0.0);
    CHECK(tc->map_point(u).norm() == doctest::Approx(1.0 + u[1]).epsilon(1e-13));
  }
  CHECK_THROWS_AS(tc->map_point({4.5, 0.5, 0}), DomainError);
}

TEST_CASE("pullback adjointness on the curved patch and the annulus") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto curved = curved_square();
  const auto tc = build_taylor_couette();
  for (int trial = 0; trial < 10; ++trial) {
    const adjoint::Poly a0 = adjoint::random_poly(rng), a1 = adjoint::random_poly(rng), rho = adjoint::random_poly(rng);
    const oracle::Vec2Field a = [&](double x, double y) { return Eigen::Vector2d(a0(x, y), a1(x, y)); };
    double u0 = U(rng), u1 = U(rng), v0 = U(rng), v1 = U(rng);
    if (u0 > u1) std::swap(u0, u1);
    if (v0 > v1) std::swap(v0, v1);

    // 0-forms: composition.
    const auto X = curved->map_point({u0, v0, 0});
    CHECK(pullback_components(0, *curved, {u0, v0, 0}, {rho(X[0], X[1])})[0] == rho(X[0], X[1]));

    // Curved patch, 1-cells along each axis and a 2-cell.
    const auto bu = curved->breakpoints(0), bv = curved->breakpoints(1);
    const double phys_u =
        oracle::mapped_line_integral(*curved, {u0, v0, 0}, {u1, v0, 0}, a, oracle::cut_fractions(u0, u1, bu), 3);
    CHECK(std::abs(phys_u - adjoint::ref_line(*curved, {u0, v0, 0}, {u1, v0, 0}, a0, a1, 0)) < 1e-11);
    const double phys_v =
        oracle::mapped_line_integral(*curved, {u1, v0, 0}, {u1, v1, 0}, a, oracle::cut_fractions(v0, v1, bv), 3);
    CHECK(std::abs(phys_v - adjoint::ref_line(*curved, {u1, v0, 0}, {u1, v1, 0}, a0, a1, 1)) < 1e-11);
    const double phys_area = oracle::mapped_area_integral(
        *curved, u0, u1, v0, v1, [&](double x, double y) { return rho.antiderivative_x(x, y); },
        oracle::cut_fractions(u0, u1, bu), oracle::cut_fractions(v0, v1, bv), 3);
    CHECK(std::abs(phys_area - adjoint::ref_area(*curved, u0, u1, v0, v1, rho)) < 1e-11);

    // Annulus: the arc at r = 1 + v0, a radial segment, and the sector between them.
    const double g0 = 4 * u0, g1 = 4 * u1;
    const double t0 = oracle::angle_near(tc->map_point({g0, v0, 0}), 0.0);
    const double t1 = oracle::angle_near(tc->map_point({g1, v0, 0}), t0 - 2 * pi * (u1 - u0));
    const double arc = oracle::arc_integral(1 + v0, t0, t1, a);
    CHECK(std::abs(arc - adjoint::ref_line(*tc, {g0, v0, 0}, {g1, v0, 0}, a0, a1, 0)) < 1e-11);
    const double radial = oracle::radial_integral(t1, 1 + v0, 1 + v1, a);
    CHECK(std::abs(radial - adjoint::ref_line(*tc, {g1, v0, 0}, {g1, v1, 0}, a0, a1, 1)) < 1e-11);
    const double sector = oracle::sector_integral(1 + v0, 1 + v1, t1, t0, rho);
    CHECK(std::abs(sector - adjoint::ref_area(*tc, g0, g1, v0, v1, rho)) < 1e-11);
  }
}

TEST_CASE("pullback commutes with d for 0-forms") {
  const auto curved = curved_square();
  auto phi = [](double x, double y) { return std::sin(2 * x) * std::exp(y) + x * y * y; };
  auto grad = [](double x, double y) {
    return Eigen::Vector2d(2 * std::cos(2 * x) * std::exp(y) + y * y, std::sin(2 * x) * std::exp(y) + 2 * x * y);
  };
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  for (int i = 0; i < 100; ++i) {
    const Point u{U(rng), U(rng), 0};
    const auto X = curved->map_point(u);
    const auto r = pullback_components(1, *curved, u, {grad(X[0], X[1])[0], grad(X[0], X[1])[1]});
    for (int a = 0; a < 2; ++a) {
      // Fourth-order central difference of φ∘Φ; the stencil stays inside one knot span.
      const double h = 1e-3;
      auto f = [&](double s) {
        Point p = u;
        p[a] += s;
        const auto Y = curved->map_point(p);
        return phi(Y[0], Y[1]);
      };
      const double span_lo = std::floor(u[a] * 4) / 4, span_hi = span_lo + 0.25;
      if (u[a] - 2 * h <= span_lo || u[a] + 2 * h >= span_hi) continue;
      const double fd = (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h);
      CHECK(std::abs(fd - r[a]) < 1e-10 * std::max(1.0, std::abs(r[a])));
    }
  }
}

TEST_CASE("projection commutes with the pullback") {
  // Physical cochains (integrals over mapped cells, computed on the physical side)
  // solved in the reference basis give the projection of the pulled-back form.
  const auto curved = curved_square();
  // Field knots contain the geometry knots, as in the harness refinement ladder.
  auto t = fixture::uniform_tensor({2, 3}, {4, 4});
  auto s1 = fixture::form_space(t, 1);
  auto s2 = fixture::form_space(t, 2);
  const oracle::Vec2Field a = [](double x, double y) { return Eigen::Vector2d(std::cos(x + y), x * x * y); };
  FormFunction phys1{1, {[&](const Point& x) { return a(x[0], x[1])[0]; }, [&](const Point& x) { return a(x[0], x[1])[1]; }}};
  const auto ref1 = project_form(pullback(phys1, *curved), s1, 20);

  const auto& dx = t->direction(0);
  const auto& dy = t->direction(1);
  const auto bu = curved->breakpoints(0), bv = curved->breakpoints(1);
  Eigen::VectorXd c1(s1->dimension());
  std::size_t idx = 0;
  for (std::size_t j = 0; j < dy.num_nodes(); ++j)
    for (std::size_t i = 0; i < dx.num_edges(); ++i) {
      const auto [lo, hi] = dx.edges()[i];
      c1[idx++] = oracle::mapped_line_integral(*curved, {lo, dy.nodes()[j], 0}, {hi, dy.nodes()[j], 0}, a,
                                               oracle::cut_fractions(lo, hi, bu), 3);
    }
  for (std::size_t j = 0; j < dy.num_edges(); ++j)
    for (std::size_t i = 0; i < dx.num_nodes(); ++i) {
      const auto [lo, hi] = dy.edges()[j];
      c1[idx++] = oracle::mapped_line_integral(*curved, {dx.nodes()[i], lo, 0}, {dx.nodes()[i], hi, 0}, a,
                                               oracle::cut_fractions(lo, hi, bv), 3);
    }
  const Eigen::VectorXd phys_coeffs = solve_change_of_basis(*s1, c1);
  CHECK((phys_coeffs - ref1.coeffs()).cwiseAbs().maxCoeff() < 1e-10);

  auto P = [](double x, double y) { return x * x * x / 3 * y + x * std::sin(y); };  // ∂P/∂x = x²y + sin y
  FormFunction phys2{2, {[](const Point& x) { return x[0] * x[0] * x[1] + std::sin(x[1]); }}};
  const auto ref2 = project_form(pullback(phys2, *curved), s2, 20);
  Eigen::VectorXd c2(s2->dimension());
  idx = 0;
  for (std::size_t j = 0; j < dy.num_edges(); ++j)
    for (std::size_t i = 0; i < dx.num_edges(); ++i) {
      const auto [u0, u1] = dx.edges()[i];
      const auto [v0, v1] = dy.edges()[j];
      c2[idx++] = oracle::mapped_area_integral(*curved, u0, u1, v0, v1, P, oracle::cut_fractions(u0, u1, bu),
                                               oracle::cut_fractions(v0, v1, bv), 3);
    }
  CHECK((solve_change_of_basis(*s2, c2) - ref2.coeffs()).cwiseAbs().maxCoeff() < 1e-10);
}
