#include "mimetic/univariate.hpp"

#include <algorithm>

#include "mimetic/errors.hpp"

namespace mimetic {

SplineSpace1D::SplineSpace1D(Basis1D basis) : SplineSpace1D(std::vector<Basis1D>{std::move(basis)}, false) {}

SplineSpace1D::SplineSpace1D(std::vector<Basis1D> segments, bool periodic)
    : segments_(std::move(segments)), periodic_(periodic) {
  if (segments_.empty()) throw ConstructionError("SplineSpace1D: no segments");
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    const auto& seg = segments_[s];
    if (seg.degree() < 1) throw ConstructionError("SplineSpace1D: segment degree must be at least 1");
    if (s > 0 && seg.knot_vector().front() != segments_[s - 1].knot_vector().back())
      throw ConstructionError("SplineSpace1D: segments must be contiguous");
    degree_ = std::max(degree_, seg.degree());
    edge_segments_.emplace_back(seg);
    edge_offset_.push_back(num_edges_);
    num_edges_ += seg.size() - 1;
  }
  if (periodic_ && num_edges_ < 2) throw ConstructionError("SplineSpace1D: periodic chain needs two edges");
  num_nodes_ = periodic_ ? num_edges_ : num_edges_ + 1;

  for (const auto& seg : segments_) {
    for (double b : seg.knot_vector().breakpoints()) {
      if (breakpoints_.empty() || b != breakpoints_.back()) breakpoints_.push_back(b);
    }
    const auto g = greville_points(seg);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (i == 0 && !nodes_.empty()) continue;
      nodes_.push_back(g[i]);
      if (i > 0) edges_.emplace_back(g[i - 1], g[i]);
    }
  }
  if (periodic_) nodes_.pop_back();
}

std::size_t SplineSpace1D::segment_of(double x) const {
  if (x < front() || x > back()) throw DomainError("SplineSpace1D: point outside the parametric range");
  for (std::size_t s = 0; s + 1 < segments_.size(); ++s) {
    if (x < segments_[s].knot_vector().back()) return s;
  }
  return segments_.size() - 1;
}

std::size_t SplineSpace1D::node_index(std::size_t segment, std::size_t local) const {
  const std::size_t g = edge_offset_[segment] + local;
  return (periodic_ && g == num_nodes_) ? 0 : g;
}

void SplineSpace1D::eval_nodes(double x, bool with_deriv, Active1D& out) const {
  const std::size_t s = segment_of(x);
  LocalBasis local;
  segments_[s].eval_local(x, with_deriv ? 1 : 0, local);
  out.count = local.count;
  for (int j = 0; j < local.count; ++j) {
    out.index[j] = node_index(s, local.first + j);
    out.value[j] = local.ders[0][j];
    out.deriv[j] = with_deriv ? local.ders[1][j] : 0.0;
  }
}

void SplineSpace1D::eval_edges(double x, bool with_deriv, Active1D& out) const {
  const std::size_t s = segment_of(x);
  LocalBasis local;
  edge_segments_[s].eval_local(x, with_deriv ? 1 : 0, local);
  out.count = local.count;
  for (int j = 0; j < local.count; ++j) {
    out.index[j] = edge_offset_[s] + local.first + j;
    out.value[j] = local.ders[0][j];
    out.deriv[j] = with_deriv ? local.ders[1][j] : 0.0;
  }
}

std::vector<double> SplineSpace1D::nodal_values(double x) const {
  Active1D a;
  eval_nodes(x, false, a);
  std::vector<double> v(num_nodes_, 0.0);
  for (int j = 0; j < a.count; ++j) v[a.index[j]] += a.value[j];
  return v;
}

std::vector<double> SplineSpace1D::edge_values(double x) const {
  Active1D a;
  eval_edges(x, false, a);
  std::vector<double> v(num_edges_, 0.0);
  for (int j = 0; j < a.count; ++j) v[a.index[j]] += a.value[j];
  return v;
}

}  // namespace mimetic
