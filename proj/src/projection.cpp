#include "mimetic/projection.hpp"

#include <algorithm>
#include <cmath>

#include "mimetic/errors.hpp"
#include "mimetic/quadrature.hpp"

namespace mimetic {

namespace {

// Pieces of [a, b] cut at the breakpoints strictly inside it.
std::vector<std::pair<double, double>> pieces(double a, double b, const std::vector<double>& breakpoints) {
  std::vector<std::pair<double, double>> out;
  double lo = a;
  for (auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), a); it != breakpoints.end() && *it < b; ++it) {
    out.emplace_back(lo, *it);
    lo = *it;
  }
  out.emplace_back(lo, b);
  return out;
}

// Quadrature nodes/weights of an interval split at breakpoints.
void interval_rule(double a, double b, const std::vector<double>& breakpoints, int npts, std::vector<double>& x,
                   std::vector<double>& w) {
  x.clear();
  w.clear();
  const auto& ref = gauss_legendre(npts);
  for (const auto& [lo, hi] : pieces(a, b, breakpoints)) {
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (std::size_t q = 0; q < ref.size(); ++q) {
      x.push_back(mid + half * ref.points[q]);
      w.push_back(half * ref.weights[q]);
    }
  }
}

void check_finite(double v, const char* where) {
  if (!std::isfinite(v)) throw NumericalError(std::string(where) + ": non-finite integrand value");
}

}  // namespace

ReductionKind reduction_kind(int k) {
  switch (k) {
    case 0:
      return ReductionKind::node_values;
    case 1:
      return ReductionKind::edge_integrals;
    case 2:
      return ReductionKind::face_integrals;
    case 3:
      return ReductionKind::volume_integrals;
    default:
      throw ArgumentError("reduction_kind: form degree out of range");
  }
}

ReducedCochain reduce_0form(const ScalarFunction& f, const std::vector<Point>& nodes) {
  Eigen::VectorXd c(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) c[i] = f(nodes[i]);
  return {Cochain{0, std::move(c)}, ReductionKind::node_values};
}

ReducedCochain reduce_1form(const std::function<double(double)>& f, const std::vector<std::pair<double, double>>& edges,
                            const std::vector<double>& breakpoints, int degree, int min_points) {
  const int npts = std::max(degree + 1, min_points);
  Eigen::VectorXd c(edges.size());
  std::vector<double> x, w;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    interval_rule(edges[i].first, edges[i].second, breakpoints, npts, x, w);
    double s = 0.0;
    for (std::size_t q = 0; q < x.size(); ++q) {
      const double v = f(x[q]);
      check_finite(v, "reduce_1form");
      s += w[q] * v;
    }
    c[i] = s;
  }
  return {Cochain{1, std::move(c)}, ReductionKind::edge_integrals};
}

ReducedCochain reduce(const FormFunction& f, const DiscreteFormSpace& space, int min_points) {
  if (f.k != space.k()) throw ArgumentError("reduce: form degree does not match the space");
  if (f.components.size() != space.num_blocks()) throw ArgumentError("reduce: one component per block required");
  const int d = space.dim();
  Eigen::VectorXd c(space.dimension());
  for (std::size_t b = 0; b < space.num_blocks(); ++b) {
    const AxisSet block = space.blocks()[b];
    const auto shape = space.block_shape(b);
    // Per axis, per cell: quadrature points and weights (a single point of weight 1 at a node).
    std::array<std::vector<std::vector<double>>, 3> px, pw;
    for (int a = 0; a < 3; ++a) {
      px[a].resize(shape[a]);
      pw[a].resize(shape[a]);
      if (a >= d) {
        px[a][0] = {0.0};
        pw[a][0] = {1.0};
        continue;
      }
      const auto& dir = space.tensor().direction(a);
      const int npts = std::max(dir.degree() + 1, min_points);
      for (std::size_t i = 0; i < shape[a]; ++i) {
        if (has_axis(block, a)) {
          interval_rule(dir.edges()[i].first, dir.edges()[i].second, dir.breakpoints(), npts, px[a][i], pw[a][i]);
        } else {
          px[a][i] = {dir.nodes()[i]};
          pw[a][i] = {1.0};
        }
      }
    }
    const auto& comp = f.components[b];
    std::size_t idx = space.block_offset(b);
    for (std::size_t i2 = 0; i2 < shape[2]; ++i2) {
      for (std::size_t i1 = 0; i1 < shape[1]; ++i1) {
        for (std::size_t i0 = 0; i0 < shape[0]; ++i0, ++idx) {
          double s = 0.0;
          for (std::size_t q2 = 0; q2 < px[2][i2].size(); ++q2) {
            for (std::size_t q1 = 0; q1 < px[1][i1].size(); ++q1) {
              for (std::size_t q0 = 0; q0 < px[0][i0].size(); ++q0) {
                const double v = comp({px[0][i0][q0], px[1][i1][q1], px[2][i2][q2]});
                check_finite(v, "reduce");
                s += pw[0][i0][q0] * pw[1][i1][q1] * pw[2][i2][q2] * v;
              }
            }
          }
          c[idx] = s;
        }
      }
    }
  }
  return {Cochain{space.k(), std::move(c)}, reduction_kind(space.k())};
}

ChangeOfBasis::ChangeOfBasis(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
    throw ArgumentError("ChangeOfBasis: matrix must be square and nonempty");
  lu_.compute(matrix_);
  const double rcond = lu_.rcond();
  condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(condition_ <= kMaxCondition))
    throw IllPosedNodesError("change of basis is singular to working precision (condition estimate " +
                             std::to_string(condition_) + ")");
}

Eigen::VectorXd ChangeOfBasis::solve(const Eigen::VectorXd& rhs) const { return lu_.solve(rhs); }
Eigen::MatrixXd ChangeOfBasis::solve(const Eigen::MatrixXd& rhs) const { return lu_.solve(rhs); }

ChangeOfBasis build_interpolation(const Basis1D& basis, const std::vector<double>& nodes) {
  const std::size_t n = basis.size();
  if (nodes.size() != n) throw ArgumentError("build_interpolation: need one node per basis function");
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = basis.eval_nodal(nodes[i]);
    for (std::size_t j = 0; j < n; ++j) N(i, j) = row[j];
  }
  return ChangeOfBasis(std::move(N));
}

ChangeOfBasis build_histopolation(const EdgeBasis1D& edge, const std::vector<std::pair<double, double>>& edges) {
  const std::size_t n = edge.size();
  if (edges.size() != n) throw ArgumentError("build_histopolation: need one edge per edge function");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = edge.parent().eval_nodal(edges[i].first);
    const auto b = edge.parent().eval_nodal(edges[i].second);
    double tail = 0.0;
    for (std::size_t j = n; j-- > 0;) {
      tail += b[j + 1] - a[j + 1];
      M(i, j) = tail;
    }
  }
  return ChangeOfBasis(std::move(M));
}

ChangeOfBasis build_interpolation(const SplineSpace1D& space) {
  const std::size_t n = space.num_nodes();
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = space.nodal_values(space.nodes()[i]);
    for (std::size_t j = 0; j < n; ++j) N(i, j) = row[j];
  }
  return ChangeOfBasis(std::move(N));
}

ChangeOfBasis build_histopolation(const SplineSpace1D& space) {
  const std::size_t n = space.num_edges();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  // Histopolation intervals never straddle segments, so the matrix is block diagonal.
  for (std::size_t s = 0; s < space.segments().size(); ++s) {
    const auto& seg = space.segments()[s];
    const std::size_t off = space.edge_offset(s), m = seg.size() - 1;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& [lo, hi] = space.edges()[off + i];
      const auto a = seg.eval_nodal(lo);
      const auto b = seg.eval_nodal(hi);
      double tail = 0.0;
      for (std::size_t j = m; j-- > 0;) {
        tail += b[j + 1] - a[j + 1];
        M(off + i, off + j) = tail;
      }
    }
  }
  return ChangeOfBasis(std::move(M));
}

Eigen::VectorXd solve_change_of_basis(const DiscreteFormSpace& space, const Eigen::VectorXd& reduced) {
  if (static_cast<std::size_t>(reduced.size()) != space.dimension())
    throw ArgumentError("solve_change_of_basis: cochain size does not match the space");
  const int d = space.dim();
  std::array<std::unique_ptr<ChangeOfBasis>, 3> interp, histo;
  Eigen::VectorXd out = reduced;
  for (std::size_t b = 0; b < space.num_blocks(); ++b) {
    const AxisSet block = space.blocks()[b];
    const auto shape = space.block_shape(b);
    double* data = out.data() + space.block_offset(b);
    std::size_t stride = 1;
    for (int a = 0; a < d; ++a) {
      auto& slot = has_axis(block, a) ? histo[a] : interp[a];
      if (!slot) {
        const auto& dir = space.tensor().direction(a);
        slot = std::make_unique<ChangeOfBasis>(has_axis(block, a) ? build_histopolation(dir) : build_interpolation(dir));
      }
      // Lines along axis a: gather into columns, solve, scatter back.
      const std::size_t n = shape[a];
      const std::size_t lines = shape[0] * shape[1] * shape[2] / n;
      Eigen::MatrixXd rhs(n, lines);
      auto line_base = [&](std::size_t l) { return (l % stride) + (l / stride) * stride * n; };
      for (std::size_t l = 0; l < lines; ++l)
        for (std::size_t i = 0; i < n; ++i) rhs(i, l) = data[line_base(l) + i * stride];
      const Eigen::MatrixXd sol = slot->solve(rhs);
      for (std::size_t l = 0; l < lines; ++l)
        for (std::size_t i = 0; i < n; ++i) data[line_base(l) + i * stride] = sol(i, l);
      stride *= n;
    }
  }
  return out;
}

DiscreteForm project_form(const FormFunction& f, std::shared_ptr<const DiscreteFormSpace> space, int min_points) {
  if (!space) throw ArgumentError("project_form: null space");
  const auto reduced = reduce(f, *space, min_points);
  auto coeffs = solve_change_of_basis(*space, reduced.cochain.coeffs);
  return DiscreteForm(std::move(space), std::move(coeffs));
}

FormFunction as_function(const DiscreteForm& form) {
  FormFunction f{form.space().k(), {}};
  for (std::size_t b = 0; b < form.space().num_blocks(); ++b)
    f.components.push_back([form, b](const Point& x) { return eval(form, x)[b]; });
  return f;
}

}  // namespace mimetic
