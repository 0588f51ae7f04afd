#include "mimetic/spaces.hpp"

#include "mimetic/errors.hpp"

namespace mimetic {

namespace {

CellComplex complex_of(const std::vector<SplineSpace1D>& dirs) {
  std::vector<std::size_t> cells;
  std::vector<bool> periodic;
  for (const auto& s : dirs) {
    cells.push_back(s.num_edges());
    periodic.push_back(s.periodic());
  }
  return CellComplex(cells, periodic);
}

// Position of axis a among the axes of T (increasing order).
int rank_in(AxisSet T, int a) { return axis_count(static_cast<AxisSet>(T & ((1u << a) - 1u))); }

}  // namespace

TensorSpace::TensorSpace(std::vector<SplineSpace1D> directions)
    : directions_(std::move(directions)), complex_(complex_of(directions_)) {
  for (int k = 1; k <= dim(); ++k) incidence_.push_back(build_incidence(complex_, k));
}

const IncidenceMatrix& TensorSpace::incidence(int k) const {
  if (k < 1 || k > dim()) throw ArgumentError("TensorSpace::incidence: k out of range");
  return incidence_[k - 1];
}

DiscreteFormSpace::DiscreteFormSpace(std::shared_ptr<const TensorSpace> tensor, int k, Orientation orientation)
    : tensor_(std::move(tensor)), k_(k), orientation_(orientation) {
  if (!tensor_) throw ArgumentError("DiscreteFormSpace: null tensor space");
  if (k < 0 || k > tensor_->dim()) throw ArgumentError("DiscreteFormSpace: form degree out of range");
  blocks_ = complex().blocks(k);
  for (AxisSet b : blocks_) {
    offsets_.push_back(dimension_);
    const auto s = complex().block_shape(b);
    dimension_ += s[0] * s[1] * s[2];
  }
}

void DiscreteFormSpace::eval_basis(const Point& x, bool with_grad, ActiveBasis& out) const {
  out.entries.clear();
  const int d = dim();
  std::array<Active1D, 3> nodes, edges;
  std::array<bool, 3> have_nodes{}, have_edges{};
  for (int b = 0; b < static_cast<int>(blocks_.size()); ++b) {
    const AxisSet block = blocks_[b];
    std::array<const Active1D*, 3> act{};
    for (int a = 0; a < d; ++a) {
      const auto& dir = tensor_->direction(a);
      if (has_axis(block, a)) {
        if (!have_edges[a]) dir.eval_edges(x[a], with_grad, edges[a]), have_edges[a] = true;
        act[a] = &edges[a];
      } else {
        if (!have_nodes[a]) dir.eval_nodes(x[a], with_grad, nodes[a]), have_nodes[a] = true;
        act[a] = &nodes[a];
      }
    }
    const auto shape = complex().block_shape(block);
    const int n0 = act[0]->count;
    const int n1 = d > 1 ? act[1]->count : 1;
    const int n2 = d > 2 ? act[2]->count : 1;
    for (int k2 = 0; k2 < n2; ++k2) {
      for (int k1 = 0; k1 < n1; ++k1) {
        for (int k0 = 0; k0 < n0; ++k0) {
          const std::array<int, 3> loc{k0, k1, k2};
          std::array<double, 3> v{1.0, 1.0, 1.0}, dv{0.0, 0.0, 0.0};
          std::size_t idx = 0, stride = 1;
          for (int a = 0; a < d; ++a) {
            v[a] = act[a]->value[loc[a]];
            dv[a] = act[a]->deriv[loc[a]];
            idx += stride * act[a]->index[loc[a]];
            stride *= shape[a];
          }
          ActiveBasis::Entry e{offsets_[b] + idx, b, v[0] * v[1] * v[2], {0.0, 0.0, 0.0}};
          if (with_grad) {
            for (int a = 0; a < d; ++a) {
              double g = dv[a];
              for (int c = 0; c < d; ++c)
                if (c != a) g *= v[c];
              e.grad[a] = g;
            }
          }
          out.entries.push_back(e);
        }
      }
    }
  }
}

Eigen::SparseMatrix<double> DiscreteFormSpace::derivative_matrix() const {
  if (k_ >= dim()) throw ArgumentError("derivative_matrix: no exterior derivative of a top form");
  return tensor_->incidence(k_ + 1).coboundary_matrix();
}

DiscreteForm::DiscreteForm(std::shared_ptr<const DiscreteFormSpace> space, Eigen::VectorXd coeffs)
    : space_(std::move(space)) {
  if (!space_) throw ArgumentError("DiscreteForm: null space");
  if (static_cast<std::size_t>(coeffs.size()) != space_->dimension())
    throw ArgumentError("DiscreteForm: coefficient count does not match the space dimension");
  cochain_ = Cochain{space_->k(), std::move(coeffs)};
}

std::size_t dimension(const DiscreteFormSpace& space) { return space.dimension(); }

std::vector<double> eval(const DiscreteForm& form, const Point& x) {
  ActiveBasis basis;
  form.space().eval_basis(x, false, basis);
  std::vector<double> values(form.space().num_blocks(), 0.0);
  for (const auto& e : basis.entries) values[e.block] += form.coeffs()[e.index] * e.value;
  return values;
}

void eval_with_gradient(const DiscreteForm& form, const Point& x, std::vector<double>& values,
                        std::vector<std::array<double, 3>>& grads) {
  ActiveBasis basis;
  form.space().eval_basis(x, true, basis);
  values.assign(form.space().num_blocks(), 0.0);
  grads.assign(form.space().num_blocks(), {0.0, 0.0, 0.0});
  for (const auto& e : basis.entries) {
    const double c = form.coeffs()[e.index];
    values[e.block] += c * e.value;
    for (int a = 0; a < 3; ++a) grads[e.block][a] += c * e.grad[a];
  }
}

DiscreteForm exterior_derivative(const DiscreteForm& form) {
  const auto& space = form.space();
  if (space.k() >= space.dim()) throw ArgumentError("exterior_derivative: no derivative of a top-degree form");
  auto next = std::make_shared<const DiscreteFormSpace>(space.tensor_ptr(), space.k() + 1, space.orientation());
  Eigen::VectorXd out = space.tensor().incidence(space.k() + 1).apply_transpose(form.coeffs());
  return DiscreteForm(std::move(next), std::move(out));
}

std::vector<double> exterior_derivative_components(int d, int k, const std::vector<std::array<double, 3>>& grads) {
  if (k < 0 || k >= d) throw ArgumentError("exterior_derivative_components: k out of range");
  // Only the blocks and orientations matter; a one-cell complex suffices.
  const CellComplex c(std::vector<std::size_t>(d, 1));
  const auto in_blocks = c.blocks(k);
  const auto out_blocks = c.blocks(k + 1);
  if (grads.size() != in_blocks.size()) throw ArgumentError("exterior_derivative_components: wrong component count");
  // d(c dx_S) = sum_a ∂_a c dx_a ∧ dx_S, and dx_a ∧ dx_S = (-1)^{rank of a in T} dx_T.
  std::vector<double> out(out_blocks.size(), 0.0);
  for (std::size_t t = 0; t < out_blocks.size(); ++t) {
    const AxisSet T = out_blocks[t];
    double sum = 0.0;
    for (int a = 0; a < d; ++a) {
      if (!has_axis(T, a)) continue;
      const AxisSet S = static_cast<AxisSet>(T & ~(1u << a));
      std::size_t s = 0;
      while (in_blocks[s] != S) ++s;
      const double sign = (rank_in(T, a) % 2 ? -1.0 : 1.0) * c.orientation(S);
      sum += sign * grads[s][a];
    }
    out[t] = c.orientation(T) * sum;
  }
  return out;
}

}  // namespace mimetic
