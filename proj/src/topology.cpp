#include "mimetic/topology.hpp"

#include <algorithm>
#include <numeric>

#include "mimetic/errors.hpp"

namespace mimetic {

CellComplex::CellComplex(std::vector<std::size_t> cells, std::vector<bool> periodic)
    : cells_(std::move(cells)), periodic_(std::move(periodic)) {
  if (cells_.empty() || cells_.size() > 3) throw ArgumentError("CellComplex: dimension must be 1, 2 or 3");
  if (periodic_.empty()) periodic_.assign(cells_.size(), false);
  if (periodic_.size() != cells_.size()) throw ArgumentError("CellComplex: one periodic flag per axis");
  for (std::size_t a = 0; a < cells_.size(); ++a) {
    if (cells_[a] < 1) throw ArgumentError("CellComplex: need at least one cell per axis");
    if (periodic_[a] && cells_[a] < 2) throw ArgumentError("CellComplex: periodic axis needs two cells");
  }
}

std::vector<AxisSet> CellComplex::blocks(int k) const {
  const int d = dim();
  if (k < 0 || k > d) throw ArgumentError("CellComplex::blocks: k out of range");
  switch (k) {
    case 0:
      return {0};
    case 1:
      if (d == 1) return {0b1};
      if (d == 2) return {0b01, 0b10};
      return {0b001, 0b010, 0b100};
    case 2:
      if (d == 2) return {0b11};
      return {0b110, 0b101, 0b011};
    default:
      return {0b111};
  }
}

std::array<std::size_t, 3> CellComplex::block_shape(AxisSet block) const {
  std::array<std::size_t, 3> shape{1, 1, 1};
  for (int a = 0; a < dim(); ++a) shape[a] = has_axis(block, a) ? cells_[a] : points(a);
  return shape;
}

std::size_t CellComplex::count(int k) const {
  std::size_t total = 0;
  for (AxisSet b : blocks(k)) {
    const auto s = block_shape(b);
    total += s[0] * s[1] * s[2];
  }
  return total;
}

std::size_t CellComplex::block_offset(int k, AxisSet block) const {
  std::size_t offset = 0;
  for (AxisSet b : blocks(k)) {
    if (b == block) return offset;
    const auto s = block_shape(b);
    offset += s[0] * s[1] * s[2];
  }
  throw ArgumentError("CellComplex::block_offset: block not part of this degree");
}

std::size_t CellComplex::index(int k, AxisSet block, const std::array<std::size_t, 3>& idx) const {
  const auto s = block_shape(block);
  return block_offset(k, block) + idx[0] + s[0] * (idx[1] + s[1] * idx[2]);
}

int CellComplex::orientation(AxisSet block) const {
  // The {x,z} face of a 3D complex is oriented dz∧dx.
  return (dim() == 3 && block == 0b101) ? -1 : 1;
}

Chain::Chain(int k, std::vector<int> coeffs) : k_(k), coeffs_(std::move(coeffs)) {
  for (int c : coeffs_) {
    if (c < -1 || c > 1) throw ArgumentError("Chain: coefficients must be -1, 0 or 1");
  }
}

Chain Chain::integer(int k, std::vector<int> coeffs) { return Chain(k, std::move(coeffs), Unchecked{}); }

IncidenceMatrix::IncidenceMatrix(int k_from, std::size_t rows, std::size_t cols, std::vector<std::size_t> col_ptr,
                                 std::vector<std::size_t> row_index, std::vector<std::int8_t> values)
    : k_from_(k_from),
      rows_(rows),
      cols_(cols),
      col_ptr_(std::move(col_ptr)),
      row_index_(std::move(row_index)),
      values_(std::move(values)) {
  if (col_ptr_.size() != cols_ + 1 || row_index_.size() != values_.size() || col_ptr_.back() != values_.size())
    throw ArgumentError("IncidenceMatrix: inconsistent compressed-column arrays");
}

std::vector<long long> IncidenceMatrix::apply(const std::vector<long long>& x) const {
  if (x.size() != cols_) throw ArgumentError("IncidenceMatrix::apply: size mismatch");
  std::vector<long long> y(rows_, 0);
  for (std::size_t c = 0; c < cols_; ++c) {
    for (std::size_t p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p) y[row_index_[p]] += values_[p] * x[c];
  }
  return y;
}

Eigen::VectorXd IncidenceMatrix::apply_transpose(const Eigen::VectorXd& y) const {
  if (static_cast<std::size_t>(y.size()) != rows_)
    throw ArgumentError("IncidenceMatrix::apply_transpose: size mismatch");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(cols_);
  for (std::size_t c = 0; c < cols_; ++c) {
    double acc = 0.0;
    for (std::size_t p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p) acc += values_[p] * y[row_index_[p]];
    x[c] = acc;
  }
  return x;
}

std::vector<long long> IncidenceMatrix::multiply_dense(const IncidenceMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw ArgumentError("IncidenceMatrix::multiply_dense: size mismatch");
  std::vector<long long> out(rows_ * rhs.cols_, 0);
  for (std::size_t j = 0; j < rhs.cols_; ++j) {
    for (std::size_t q = rhs.col_ptr_[j]; q < rhs.col_ptr_[j + 1]; ++q) {
      const std::size_t mid = rhs.row_index_[q];
      for (std::size_t p = col_ptr_[mid]; p < col_ptr_[mid + 1]; ++p)
        out[row_index_[p] * rhs.cols_ + j] += static_cast<long long>(values_[p]) * rhs.values_[q];
    }
  }
  return out;
}

std::vector<std::vector<int>> IncidenceMatrix::to_dense() const {
  std::vector<std::vector<int>> dense(rows_, std::vector<int>(cols_, 0));
  for (std::size_t c = 0; c < cols_; ++c) {
    for (std::size_t p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p) dense[row_index_[p]][c] = values_[p];
  }
  return dense;
}

Eigen::SparseMatrix<double> IncidenceMatrix::coboundary_matrix() const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(values_.size());
  for (std::size_t c = 0; c < cols_; ++c) {
    for (std::size_t p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p)
      triplets.emplace_back(static_cast<int>(c), static_cast<int>(row_index_[p]), values_[p]);
  }
  Eigen::SparseMatrix<double> D(static_cast<Eigen::Index>(cols_), static_cast<Eigen::Index>(rows_));
  D.setFromTriplets(triplets.begin(), triplets.end());
  return D;
}

IncidenceMatrix build_incidence(const CellComplex& complex, int k) {
  const int d = complex.dim();
  if (k < 1 || k > d) throw ArgumentError("build_incidence: k must satisfy 1 <= k <= dim");
  const std::size_t rows = complex.count(k - 1);
  const std::size_t cols = complex.count(k);
  std::vector<std::size_t> col_ptr{0};
  std::vector<std::size_t> row_index;
  std::vector<std::int8_t> values;
  col_ptr.reserve(cols + 1);
  row_index.reserve(2 * k * cols);
  values.reserve(2 * k * cols);

  std::vector<std::pair<std::size_t, int>> entries;
  for (AxisSet block : complex.blocks(k)) {
    const auto shape = complex.block_shape(block);
    std::array<int, 3> axes{};
    int na = 0;
    for (int a = 0; a < d; ++a) {
      if (has_axis(block, a)) axes[na++] = a;
    }
    const int cell_sign = complex.orientation(block);
    for (std::size_t i2 = 0; i2 < shape[2]; ++i2) {
      for (std::size_t i1 = 0; i1 < shape[1]; ++i1) {
        for (std::size_t i0 = 0; i0 < shape[0]; ++i0) {
          const std::array<std::size_t, 3> idx{i0, i1, i2};
          entries.clear();
          for (int m = 0; m < na; ++m) {
            const int a = axes[m];
            const AxisSet face = static_cast<AxisSet>(block & ~(1u << a));
            const int sign = cell_sign * complex.orientation(face) * ((m % 2 == 0) ? 1 : -1);
            auto hi = idx;
            hi[a] = (idx[a] + 1) % complex.points(a);
            entries.emplace_back(complex.index(k - 1, face, idx), -sign);
            entries.emplace_back(complex.index(k - 1, face, hi), sign);
          }
          std::sort(entries.begin(), entries.end());
          for (const auto& [row, v] : entries) {
            if (!row_index.empty() && row_index.size() > col_ptr.back() && row_index.back() == row) {
              values.back() = static_cast<std::int8_t>(values.back() + v);
              continue;
            }
            row_index.push_back(row);
            values.push_back(static_cast<std::int8_t>(v));
          }
          col_ptr.push_back(row_index.size());
        }
      }
    }
  }
  return IncidenceMatrix(k, rows, cols, std::move(col_ptr), std::move(row_index), std::move(values));
}

Chain boundary(const Chain& chain, const IncidenceMatrix& E) {
  if (chain.k() != E.k_from() || chain.size() != E.cols())
    throw ArgumentError("boundary: chain does not match the incidence matrix");
  std::vector<long long> x(chain.coeffs().begin(), chain.coeffs().end());
  const auto y = E.apply(x);
  return Chain::integer(E.k_to(), std::vector<int>(y.begin(), y.end()));
}

Cochain coboundary(const Cochain& cochain, const IncidenceMatrix& E) {
  if (cochain.k != E.k_to() || static_cast<std::size_t>(cochain.coeffs.size()) != E.rows())
    throw ArgumentError("coboundary: cochain does not match the incidence matrix");
  return Cochain{E.k_from(), E.apply_transpose(cochain.coeffs)};
}

double duality_pairing(const Cochain& a, const Chain& c) {
  if (a.k != c.k() || static_cast<std::size_t>(a.coeffs.size()) != c.size())
    throw ArgumentError("duality_pairing: cochain and chain do not match");
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) sum += a.coeffs[static_cast<Eigen::Index>(i)] * c.coeffs()[i];
  return sum;
}

}  // namespace mimetic
