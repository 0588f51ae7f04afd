#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <array>
#include <memory>
#include <vector>

#include "mimetic/topology.hpp"
#include "mimetic/univariate.hpp"

namespace mimetic {

using Point = std::array<double, 3>;

enum class Orientation { inner, outer };

/// Per-direction univariate spaces and the cell complex they induce: along axis a
/// there are as many cells as edge functions.
class TensorSpace {
 public:
  explicit TensorSpace(std::vector<SplineSpace1D> directions);

  int dim() const noexcept { return static_cast<int>(directions_.size()); }
  const SplineSpace1D& direction(int axis) const { return directions_.at(axis); }
  const CellComplex& complex() const noexcept { return complex_; }
  /// E_{k-1,k}, 1 <= k <= dim.
  const IncidenceMatrix& incidence(int k) const;

 private:
  std::vector<SplineSpace1D> directions_;
  CellComplex complex_;
  std::vector<IncidenceMatrix> incidence_;
};

/// Tensor-product basis functions active at a point. Gradients are parametric.
struct ActiveBasis {
  struct Entry {
    std::size_t index;
    int block;
    double value;
    std::array<double, 3> grad;
  };
  std::vector<Entry> entries;
};

/// Λ^k_h on a tensor space. Block b uses edge functions along the axes it spans and
/// nodal functions along the rest; its component is the coefficient of the block's
/// oriented basis element (dx, dy, dz; dy∧dz, dz∧dx, dx∧dy; ...).
class DiscreteFormSpace {
 public:
  DiscreteFormSpace(std::shared_ptr<const TensorSpace> tensor, int k, Orientation orientation = Orientation::outer);

  int dim() const noexcept { return tensor_->dim(); }
  int k() const noexcept { return k_; }
  Orientation orientation() const noexcept { return orientation_; }
  const TensorSpace& tensor() const noexcept { return *tensor_; }
  const std::shared_ptr<const TensorSpace>& tensor_ptr() const noexcept { return tensor_; }
  const CellComplex& complex() const noexcept { return tensor_->complex(); }

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<AxisSet>& blocks() const noexcept { return blocks_; }
  std::size_t num_blocks() const noexcept { return blocks_.size(); }
  std::size_t block_offset(std::size_t b) const { return offsets_.at(b); }
  std::array<std::size_t, 3> block_shape(std::size_t b) const { return complex().block_shape(blocks_.at(b)); }

  void eval_basis(const Point& x, bool with_grad, ActiveBasis& out) const;

  /// D_{k+1,k} = E_{k,k+1}^T.
  Eigen::SparseMatrix<double> derivative_matrix() const;

 private:
  std::shared_ptr<const TensorSpace> tensor_;
  int k_;
  Orientation orientation_;
  std::vector<AxisSet> blocks_;
  std::vector<std::size_t> offsets_;
  std::size_t dimension_ = 0;
};

class DiscreteForm {
 public:
  DiscreteForm(std::shared_ptr<const DiscreteFormSpace> space, Eigen::VectorXd coeffs);

  const DiscreteFormSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const DiscreteFormSpace>& space_ptr() const noexcept { return space_; }
  const Eigen::VectorXd& coeffs() const noexcept { return cochain_.coeffs; }
  const Cochain& cochain() const noexcept { return cochain_; }

 private:
  std::shared_ptr<const DiscreteFormSpace> space_;
  Cochain cochain_;
};

std::size_t dimension(const DiscreteFormSpace& space);

/// Component values at a parametric point, one per block.
std::vector<double> eval(const DiscreteForm& form, const Point& x);
/// Component values and their parametric gradients.
void eval_with_gradient(const DiscreteForm& form, const Point& x, std::vector<double>& values,
                        std::vector<std::array<double, 3>>& grads);

DiscreteForm exterior_derivative(const DiscreteForm& form);

/// Components of d a for a k-form a in d dimensions, given the gradients of a's
/// components (blocks in the numbering order, oriented as in CellComplex).
std::vector<double> exterior_derivative_components(int d, int k, const std::vector<std::array<double, 3>>& grads);

}  // namespace mimetic
