#include "mimetic/assembly.hpp"

#include <Eigen/SparseLU>
#ifdef MIMETIC_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif
#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "mimetic/errors.hpp"
#include "mimetic/quadrature.hpp"

namespace mimetic {

namespace {

std::vector<double> merge_cuts(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  const double tol = 1e-12 * std::max(1.0, std::abs(a.back() - a.front()));
  std::vector<double> out;
  for (double x : a)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  return out;
}

void require_2d(const DiscreteFormSpace& space) {
  if (space.dim() != 2) throw ArgumentError("assembly: only 2D spaces are supported");
}

std::size_t element_count(const ElementQuadrature& q) { return (q.cuts[0].size() - 1) * (q.cuts[1].size() - 1); }

// Tensor Gauss points and weights of element e (axis 0 fastest).
void element_rule(const ElementQuadrature& q, std::size_t e, std::vector<Point>& pts, std::vector<double>& w) {
  const std::size_t ne0 = q.cuts[0].size() - 1;
  const std::size_t i = e % ne0, j = e / ne0;
  const auto& r0 = gauss_legendre(q.points[0]);
  const auto& r1 = gauss_legendre(q.points[1]);
  const double a0 = q.cuts[0][i], b0 = q.cuts[0][i + 1], a1 = q.cuts[1][j], b1 = q.cuts[1][j + 1];
  const double h0 = 0.5 * (b0 - a0), h1 = 0.5 * (b1 - a1);
  pts.clear();
  w.clear();
  for (std::size_t t = 0; t < r1.size(); ++t)
    for (std::size_t s = 0; s < r0.size(); ++s) {
      pts.push_back({a0 + h0 * (1.0 + r0.points[s]), a1 + h1 * (1.0 + r1.points[t]), 0.0});
      w.push_back(h0 * h1 * r0.weights[s] * r1.weights[t]);
    }
}

// Metric factor of the mass integrand for basis components in blocks bi, bj.
struct Metric {
  int k;
  double det;
  Eigen::Matrix2d ginv;
  Metric(int k_, const Eigen::Matrix2d& J) : k(k_), det(checked_det(J)) {
    if (k == 1) ginv = (J.transpose() * J).inverse();
  }
  double operator()(int bi, int bj) const {
    switch (k) {
      case 0:
        return det;
      case 1:
        return ginv(bi, bj) * det;
      default:
        return 1.0 / det;
    }
  }
};

struct LocalMatrix {
  std::vector<std::size_t> index;
  Eigen::MatrixXd values;
};

LocalMatrix local_mass(const DiscreteFormSpace& space, const Geometry& geometry, const ElementQuadrature& q,
                       std::size_t e) {
  std::vector<Point> pts;
  std::vector<double> w;
  element_rule(q, e, pts, w);
  LocalMatrix local;
  ActiveBasis basis;
  for (std::size_t g = 0; g < pts.size(); ++g) {
    space.eval_basis(pts[g], false, basis);
    const auto& en = basis.entries;
    if (g == 0) {
      for (const auto& x : en) local.index.push_back(x.index);
      local.values = Eigen::MatrixXd::Zero(en.size(), en.size());
    }
    const Metric metric(space.k(), geometry.jacobian(pts[g]));
    for (std::size_t a = 0; a < en.size(); ++a)
      for (std::size_t b = 0; b < en.size(); ++b)
        local.values(a, b) += w[g] * en[a].value * en[b].value * metric(en[a].block, en[b].block);
  }
  return local;
}

// Map a parallel element loop's exception back to the caller.
template <class F>
void parallel_elements(std::size_t ne, F&& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (long e = 0; e < static_cast<long>(ne); ++e) {
    try {
      body(static_cast<std::size_t>(e));
    } catch (...) {
#pragma omp critical(mimetic_assembly_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

// Sides of the parametric rectangle in non-periodic directions. `axis` is the
// direction normal to the side; the side runs along the other axis.
struct Side2D {
  int axis;
  bool hi;
  // Sign turning ∂Φ/∂u_along into the counterclockwise tangent.
  double sign() const { return axis == 1 ? (hi ? -1.0 : 1.0) : (hi ? 1.0 : -1.0); }
};

std::vector<Side2D> boundary_sides(const TensorSpace& t) {
  std::vector<Side2D> out;
  for (int a = 0; a < 2; ++a) {
    if (t.direction(a).periodic()) continue;
    out.push_back({a, false});
    out.push_back({a, true});
  }
  return out;
}

void check_system_spaces(const SaddleSystem& s) {
  if (!s.space0 || !s.space1 || !s.space2 || !s.geometry) throw ArgumentError("SaddleSystem: incomplete system");
}

}  // namespace

ElementQuadrature element_quadrature(const TensorSpace& space, const Geometry& geometry, int points) {
  if (space.dim() != 2) throw ArgumentError("element_quadrature: only 2D spaces are supported");
  ElementQuadrature q;
  for (int a = 0; a < 2; ++a) {
    q.cuts[a] = merge_cuts(space.direction(a).breakpoints(), geometry.breakpoints(a));
    q.points[a] = points > 0 ? points : geometry.degree(a) + space.direction(a).degree() + 1;
  }
  return q;
}

MassMatrix assemble_mass(const DiscreteFormSpace& space, const Geometry& geometry, int points) {
  require_2d(space);
  const auto q = element_quadrature(space.tensor(), geometry, points);
  const std::size_t ne = element_count(q);
  std::vector<LocalMatrix> locals(ne);
  parallel_elements(ne, [&](std::size_t e) { locals[e] = local_mass(space, geometry, q, e); });
  std::size_t nnz = 0;
  for (const auto& l : locals) nnz += l.index.size() * l.index.size();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(nnz);
  for (const auto& l : locals)
    for (std::size_t a = 0; a < l.index.size(); ++a)
      for (std::size_t b = 0; b < l.index.size(); ++b) trip.emplace_back(l.index[a], l.index[b], l.values(a, b));
  MassMatrix m{space.k(), Eigen::SparseMatrix<double>(space.dimension(), space.dimension())};
  m.matrix.setFromTriplets(trip.begin(), trip.end());
  return m;
}

MassMatrix assemble_mass_serial(const DiscreteFormSpace& space, const Geometry& geometry, int points) {
  require_2d(space);
  const auto q = element_quadrature(space.tensor(), geometry, points);
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<Point> pts;
  std::vector<double> w;
  ActiveBasis basis;
  for (std::size_t e = 0; e < element_count(q); ++e) {
    element_rule(q, e, pts, w);
    for (std::size_t g = 0; g < pts.size(); ++g) {
      space.eval_basis(pts[g], false, basis);
      const Metric metric(space.k(), geometry.jacobian(pts[g]));
      for (const auto& a : basis.entries)
        for (const auto& b : basis.entries)
          trip.emplace_back(a.index, b.index, w[g] * a.value * b.value * metric(a.block, b.block));
    }
  }
  MassMatrix m{space.k(), Eigen::SparseMatrix<double>(space.dimension(), space.dimension())};
  m.matrix.setFromTriplets(trip.begin(), trip.end());
  return m;
}

Eigen::VectorXd assemble_load(const DiscreteFormSpace& space, const Geometry& geometry, const FormFunction& f,
                              int points) {
  require_2d(space);
  if (f.k != space.k() || f.components.size() != space.num_blocks())
    throw ArgumentError("assemble_load: form does not match the space");
  // Load data is not polynomial, so the rule gets a floor above the matrix rule.
  auto q = element_quadrature(space.tensor(), geometry, points);
  if (points <= 0)
    for (auto& n : q.points) n = std::max(n, kLoadMinPoints);
  const std::size_t ne = element_count(q);
  std::vector<std::vector<std::pair<std::size_t, double>>> locals(ne);
  parallel_elements(ne, [&](std::size_t e) {
    std::vector<Point> pts;
    std::vector<double> w;
    element_rule(q, e, pts, w);
    ActiveBasis basis;
    auto& local = locals[e];
    for (std::size_t g = 0; g < pts.size(); ++g) {
      space.eval_basis(pts[g], false, basis);
      if (g == 0)
        for (const auto& x : basis.entries) local.emplace_back(x.index, 0.0);
      const Eigen::Matrix2d J = geometry.jacobian(pts[g]);
      const double det = checked_det(J);
      const Eigen::Vector2d X = geometry.map_point(pts[g]);
      const Point px{X[0], X[1], 0.0};
      // (β, f) = ∫ β_phys · f_phys det J du with β_phys the push-forward of β.
      std::array<double, 2> coupling{};
      if (space.k() == 1) {
        const Eigen::Vector2d fv(f.components[0](px), f.components[1](px));
        const Eigen::Vector2d r = J.partialPivLu().solve(fv) * det;
        coupling = {r[0], r[1]};
      } else {
        const double fv = f.components[0](px);
        coupling[0] = space.k() == 0 ? fv * det : fv;
      }
      for (std::size_t a = 0; a < basis.entries.size(); ++a)
        local[a].second += w[g] * basis.entries[a].value * coupling[basis.entries[a].block];
    }
  });
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dimension());
  for (const auto& l : locals)
    for (const auto& [i, v] : l) out[i] += v;
  return out;
}

SaddleSystem assemble_vvp(std::shared_ptr<const TensorSpace> space, std::shared_ptr<const Geometry> geometry,
                          double nu, const FormFunction& forcing, int points) {
  if (!space || !geometry) throw ArgumentError("assemble_vvp: null space or geometry");
  if (space->dim() != 2) throw ArgumentError("assemble_vvp: the formulation is two-dimensional");
  if (!(nu > 0.0)) throw ArgumentError("assemble_vvp: viscosity must be positive");
  SaddleSystem s;
  s.space0 = std::make_shared<const DiscreteFormSpace>(space, 0);
  s.space1 = std::make_shared<const DiscreteFormSpace>(space, 1);
  s.space2 = std::make_shared<const DiscreteFormSpace>(space, 2);
  s.geometry = std::move(geometry);
  s.nu = nu;
  s.points = points;
  s.M0 = assemble_mass(*s.space0, *s.geometry, points);
  s.M1 = assemble_mass(*s.space1, *s.geometry, points);
  s.M2 = assemble_mass(*s.space2, *s.geometry, points);
  s.D10 = s.space0->derivative_matrix();
  s.D21 = s.space1->derivative_matrix();

  const std::size_t n0 = s.n0(), n1 = s.n1(), N = s.size();
  const Eigen::SparseMatrix<double> B = (s.M1.matrix * s.D10).pruned();  // M1 D10
  const Eigen::SparseMatrix<double> C = (s.M2.matrix * s.D21).pruned();  // M2 D21
  std::vector<Eigen::Triplet<double>> trip;
  auto add = [&](const Eigen::SparseMatrix<double>& m, std::size_t r0, std::size_t c0, double scale, bool transpose) {
    for (int k = 0; k < m.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
        const std::size_t r = transpose ? it.col() : it.row();
        const std::size_t c = transpose ? it.row() : it.col();
        trip.emplace_back(r0 + r, c0 + c, scale * it.value());
      }
  };
  add(s.M0.matrix, 0, 0, -nu, false);
  add(B, 0, n0, nu, true);
  add(B, n0, 0, nu, false);
  add(C, n0, n0 + n1, 1.0, true);
  add(C, n0 + n1, n0, 1.0, false);
  s.matrix.resize(N, N);
  s.matrix.setFromTriplets(trip.begin(), trip.end());

  s.rhs = Eigen::VectorXd::Zero(N);
  s.rhs.segment(n0, n1) = assemble_load(*s.space1, *s.geometry, forcing, points);
  s.constrained.assign(N, false);
  s.constrained_values = Eigen::VectorXd::Zero(N);
  return s;
}

std::vector<std::pair<std::size_t, double>> normal_velocity_dofs(const SaddleSystem& s, const BoundaryField& a) {
  check_system_spaces(s);
  const auto& t = s.space1->tensor();
  const auto& complex = t.complex();
  const auto q = element_quadrature(t, *s.geometry, s.points);
  std::vector<std::pair<std::size_t, double>> out;
  for (const auto side : boundary_sides(t)) {
    const int along = 1 - side.axis;
    const auto& dir_n = t.direction(side.axis);
    const auto& dir_t = t.direction(along);
    const double fixed = side.hi ? dir_n.back() : dir_n.front();
    // Edge integrals of the pulled-back tangential component along the side.
    auto component = [&](double x) {
      Point u{0, 0, 0};
      u[side.axis] = fixed;
      u[along] = x;
      const Eigen::Vector2d X = s.geometry->map_point(u);
      return s.geometry->jacobian(u).col(along).dot(a({X[0], X[1], 0.0}));
    };
    const auto reduced = reduce_1form(component, dir_t.edges(), q.cuts[along], dir_t.degree(),
                                      std::max(q.points[along], kLoadMinPoints));
    const Eigen::VectorXd coeffs = build_histopolation(dir_t).solve(reduced.cochain.coeffs);
    const AxisSet block = static_cast<AxisSet>(1u << along);
    const std::size_t node = side.hi ? dir_n.num_nodes() - 1 : 0;
    for (std::size_t e = 0; e < dir_t.num_edges(); ++e) {
      std::array<std::size_t, 3> idx{0, 0, 0};
      idx[along] = e;
      idx[side.axis] = node;
      out.emplace_back(complex.index(1, block, idx), coeffs[e]);
    }
  }
  return out;
}

void apply_strong_normal_velocity(SaddleSystem& s, const BoundaryField& a) {
  const auto dofs = normal_velocity_dofs(s, a);
  Eigen::VectorXd ub = Eigen::VectorXd::Zero(s.n1());
  double scale = 0.0;
  for (const auto& [i, v] : dofs) {
    ub[i] = v;
    scale += std::abs(v);
  }
  // Net outward flux of the prescribed data: the sum of its divergence over all faces.
  const double imbalance = (s.D21 * ub).sum();
  if (std::abs(imbalance) > 1e-10 * std::max(1.0, scale)) {
    std::ostringstream msg;
    msg << "prescribed normal velocity has net flux " << imbalance << " through the closed boundary";
    throw FluxImbalanceError(msg.str(), imbalance);
  }
  for (const auto& [i, v] : dofs) {
    s.constrained[s.n0() + i] = true;
    s.constrained_values[s.n0() + i] = v;
  }
  // With the normal velocity fixed everywhere, pressure is determined up to a constant.
  s.gauge = boundary_sides(s.space1->tensor()).size() > 0;
}

Eigen::VectorXd tangential_boundary_vector(const SaddleSystem& s, const BoundaryField& a) {
  check_system_spaces(s);
  const auto& t = s.space0->tensor();
  const auto q = element_quadrature(t, *s.geometry, s.points);
  Eigen::VectorXd b1 = Eigen::VectorXd::Zero(s.n0());
  ActiveBasis basis;
  for (const auto side : boundary_sides(t)) {
    const int along = 1 - side.axis;
    const auto& dir_n = t.direction(side.axis);
    const double fixed = side.hi ? dir_n.back() : dir_n.front();
    // Same rule as the mass matrices along the side: with it the vorticity equation
    // keeps its tensor structure, so fields the discrete spaces contain are reproduced.
    const auto& rule = gauss_legendre(q.points[along]);
    const auto& cuts = q.cuts[along];
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double h = 0.5 * (cuts[c + 1] - cuts[c]);
      for (std::size_t g = 0; g < rule.size(); ++g) {
        Point u{0, 0, 0};
        u[side.axis] = fixed;
        u[along] = cuts[c] + h * (1.0 + rule.points[g]);
        const Eigen::Vector2d tangent = side.sign() * s.geometry->jacobian(u).col(along);
        const Eigen::Vector2d X = s.geometry->map_point(u);
        const Eigen::Vector2d av = a({X[0], X[1], 0.0});
        // a·n ds with the outward normal n ds = (t_y, -t_x) dt.
        const double flux = av[0] * tangent[1] - av[1] * tangent[0];
        s.space0->eval_basis(u, false, basis);
        for (const auto& e : basis.entries) b1[e.index] += h * rule.weights[g] * e.value * flux;
      }
    }
  }
  return b1;
}

void apply_weak_tangential_velocity(SaddleSystem& s, const BoundaryField& a) {
  s.rhs.head(s.n0()) += s.nu * tangential_boundary_vector(s, a);
}

Solution solve(const SaddleSystem& s) {
  const std::size_t N = s.size();
  if (static_cast<std::size_t>(s.matrix.rows()) != N || static_cast<std::size_t>(s.rhs.size()) != N)
    throw ArgumentError("solve: system is not assembled");
  std::vector<long> map(N, -1);
  std::size_t nf = 0;
  for (std::size_t i = 0; i < N; ++i)
    if (!s.constrained[i]) map[i] = static_cast<long>(nf++);
  const std::size_t nk = nf + (s.gauge ? 1 : 0);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nk);
  for (std::size_t i = 0; i < N; ++i)
    if (map[i] >= 0) b[map[i]] = s.rhs[i];
  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < s.matrix.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(s.matrix, c); it; ++it) {
      const long r = map[it.row()], cc = map[it.col()];
      if (r < 0) continue;
      if (cc >= 0)
        trip.emplace_back(r, cc, it.value());
      else
        b[r] -= it.value() * s.constrained_values[it.col()];
    }
  }
  if (s.gauge) {
    // Σ p̄_i = ∫ p: each 2-form basis function has unit integral.
    for (std::size_t i = s.n0() + s.n1(); i < N; ++i) {
      if (map[i] < 0) continue;
      trip.emplace_back(map[i], nf, 1.0);
      trip.emplace_back(nf, map[i], 1.0);
    }
  }
  Eigen::SparseMatrix<double> K(nk, nk);
  K.setFromTriplets(trip.begin(), trip.end());
  K.makeCompressed();

  // Symmetric equilibration S K S keeps the pivoting well scaled across the blocks.
  Eigen::VectorXd scale = Eigen::VectorXd::Zero(nk);
  for (int c = 0; c < K.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, c); it; ++it)
      scale[it.row()] = std::max(scale[it.row()], std::abs(it.value()));
  for (Eigen::Index i = 0; i < scale.size(); ++i) {
    if (scale[i] == 0.0)
      throw SingularSystemError("saddle system has an empty row (unknown " + std::to_string(i) +
                                "); the null space is at least one-dimensional");
    scale[i] = 1.0 / std::sqrt(scale[i]);
  }
  const Eigen::SparseMatrix<double> Ks = scale.asDiagonal() * K * scale.asDiagonal();
  const Eigen::VectorXd bs = scale.asDiagonal() * b;

#ifdef MIMETIC_HAVE_UMFPACK
  Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
  lu.umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
  lu.umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_METIS;
  lu.compute(Ks);
  const std::string detail = "UMFPACK";
#else
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(Ks);
  const std::string detail = lu.lastErrorMessage();
#endif
  if (lu.info() != Eigen::Success)
    throw SingularSystemError("saddle system factorization failed (" + detail +
                              "); a constant-pressure null space remains unless the gauge is enabled");
  Eigen::VectorXd y = lu.solve(bs);
  const double bnorm = b.cwiseAbs().maxCoeff();
  auto relative_residual = [&](const Eigen::VectorXd& xs) {
    const double r = (K * scale.cwiseProduct(xs) - b).cwiseAbs().maxCoeff();
    return bnorm > 0.0 ? r / bnorm : r;
  };
  double residual = relative_residual(y);
  for (int step = 0; step < 3 && residual >= 1e-12; ++step) {
    const Eigen::VectorXd r = bs - Ks * y;
    const Eigen::VectorXd dy = lu.solve(r);
    y += dy;
    residual = relative_residual(y);
  }
  if (!(residual < 1e-10)) {
    std::ostringstream msg;
    msg << "saddle system solve residual " << residual << " exceeds 1e-10";
    throw SingularSystemError(msg.str());
  }
  const Eigen::VectorXd x = scale.cwiseProduct(y);
  Eigen::VectorXd full = s.constrained_values;
  for (std::size_t i = 0; i < N; ++i)
    if (map[i] >= 0) full[i] = x[map[i]];
  Solution sol;
  sol.omega = full.head(s.n0());
  sol.u = full.segment(s.n0(), s.n1());
  sol.p = full.tail(s.n2());
  sol.residual = residual;
  sol.multiplier = s.gauge ? x[nf] : 0.0;
  return sol;
}

double asymmetry(const Eigen::SparseMatrix<double>& A) {
  const Eigen::SparseMatrix<double> At = A.transpose();
  const Eigen::SparseMatrix<double> diff = A - At;
  double dmax = 0.0, amax = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) amax = std::max(amax, std::abs(it.value()));
  return amax > 0.0 ? dmax / amax : 0.0;
}

}  // namespace mimetic
