#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mimetic {

/// Set of coordinate axes spanned by a cell, as a bit mask (bit a = axis a).
using AxisSet = std::uint8_t;

inline constexpr int axis_count(AxisSet s) { return __builtin_popcount(s); }
inline constexpr bool has_axis(AxisSet s, int a) { return (s >> a) & 1u; }

/// Tensor-product cell complex with n_a cells along each axis a. A periodic axis
/// identifies its two end points, so it has n_a rather than n_a + 1 vertices.
///
/// k-cells are grouped in blocks by spanned axes: 1-cells x-, y-, z-directed;
/// 3D 2-cells by normal axis ({y,z}, {z,x}, {x,y}). Inside a block cells are
/// numbered lexicographically with axis 0 fastest. Cells are oriented along
/// increasing coordinates, 3D faces by their normal (dy∧dz, dz∧dx, dx∧dy).
class CellComplex {
 public:
  explicit CellComplex(std::vector<std::size_t> cells, std::vector<bool> periodic = {});

  int dim() const noexcept { return static_cast<int>(cells_.size()); }
  std::size_t cells(int axis) const { return cells_[axis]; }
  bool periodic(int axis) const { return periodic_[axis]; }
  /// Vertex count along an axis.
  std::size_t points(int axis) const { return periodic_[axis] ? cells_[axis] : cells_[axis] + 1; }

  /// Number of k-cells.
  std::size_t count(int k) const;
  /// Axis blocks of the k-cells, in numbering order.
  std::vector<AxisSet> blocks(int k) const;
  /// Extent of a block along each axis.
  std::array<std::size_t, 3> block_shape(AxisSet block) const;
  /// Index of the first k-cell of the given block.
  std::size_t block_offset(int k, AxisSet block) const;
  /// Global index of the cell of `block` at multi-index idx (entries beyond dim() ignored).
  std::size_t index(int k, AxisSet block, const std::array<std::size_t, 3>& idx) const;
  /// +1 or -1: orientation of the block relative to the increasing-axis wedge.
  int orientation(AxisSet block) const;

  bool operator==(const CellComplex&) const = default;

 private:
  std::vector<std::size_t> cells_;
  std::vector<bool> periodic_;
};

/// Integer chain; elementary chains carry coefficients in {-1, 0, 1}.
class Chain {
 public:
  Chain(int k, std::vector<int> coeffs);

  int k() const noexcept { return k_; }
  const std::vector<int>& coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Boundaries of chains are integer chains; coefficients may reach ±2 where
  /// oppositely oriented cells share a face, so they bypass the range check.
  static Chain integer(int k, std::vector<int> coeffs);

 private:
  struct Unchecked {};
  Chain(int k, std::vector<int> coeffs, Unchecked) : k_(k), coeffs_(std::move(coeffs)) {}
  int k_;
  std::vector<int> coeffs_;
};

/// Real-valued k-cochain.
struct Cochain {
  int k = 0;
  Eigen::VectorXd coeffs;
};

/// Boundary map E_{k-1,k} in compressed-column integer storage.
class IncidenceMatrix {
 public:
  IncidenceMatrix(int k_from, std::size_t rows, std::size_t cols, std::vector<std::size_t> col_ptr,
                  std::vector<std::size_t> row_index, std::vector<std::int8_t> values);

  int k_from() const noexcept { return k_from_; }
  int k_to() const noexcept { return k_from_ - 1; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  const std::vector<std::size_t>& col_ptr() const noexcept { return col_ptr_; }
  const std::vector<std::size_t>& row_index() const noexcept { return row_index_; }
  const std::vector<std::int8_t>& values() const noexcept { return values_; }

  /// E x in exact integer arithmetic.
  std::vector<long long> apply(const std::vector<long long>& x) const;
  /// E^T y in floating point.
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& y) const;
  /// Integer product this * rhs, dense row-major.
  std::vector<long long> multiply_dense(const IncidenceMatrix& rhs) const;
  std::vector<std::vector<int>> to_dense() const;
  /// Coboundary matrix D_{k,k-1} = E^T as a real sparse matrix.
  Eigen::SparseMatrix<double> coboundary_matrix() const;

  bool operator==(const IncidenceMatrix&) const = default;

 private:
  int k_from_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::size_t> col_ptr_;
  std::vector<std::size_t> row_index_;
  std::vector<std::int8_t> values_;
};

/// E_{k-1,k} of the complex, 1 <= k <= dim.
IncidenceMatrix build_incidence(const CellComplex& complex, int k);

Chain boundary(const Chain& chain, const IncidenceMatrix& E);
Cochain coboundary(const Cochain& cochain, const IncidenceMatrix& E);
double duality_pairing(const Cochain& a, const Chain& c);

}  // namespace mimetic
