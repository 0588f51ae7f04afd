#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "mimetic/splines.hpp"

namespace mimetic {

/// Basis functions active at a point, with global indices.
struct Active1D {
  static constexpr int kMax = LocalBasis::kMaxDegree + 1;
  int count = 0;
  std::array<std::size_t, kMax> index{};
  std::array<double, kMax> value{};
  std::array<double, kMax> deriv{};
};

/// A univariate node/edge space on a chain of open-knot-vector segments glued C0 at
/// shared end points, optionally closed into a loop. One segment is the ordinary case.
///
/// Nodes are numbered consecutively along the chain; edge e joins node e to node e+1
/// (modulo the node count when periodic). Edge functions of a segment are that
/// segment's own M_i, so the coboundary of the glued chain is the 1D incidence.
class SplineSpace1D {
 public:
  explicit SplineSpace1D(Basis1D basis);
  SplineSpace1D(std::vector<Basis1D> segments, bool periodic);

  const std::vector<Basis1D>& segments() const noexcept { return segments_; }
  bool periodic() const noexcept { return periodic_; }
  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t num_edges() const noexcept { return num_edges_; }
  double front() const noexcept { return segments_.front().knot_vector().front(); }
  double back() const noexcept { return segments_.back().knot_vector().back(); }
  /// Largest nodal degree over the segments.
  int degree() const noexcept { return degree_; }

  /// Distinct knot values of all segments (element boundaries).
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  /// Interpolation nodes, one per global node (Greville points of each segment).
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  /// Histopolation intervals [g_{i-1}, g_i], one per global edge.
  const std::vector<std::pair<double, double>>& edges() const noexcept { return edges_; }

  /// Segment owning x: a_s <= x < b_s, the last segment for x == back().
  std::size_t segment_of(double x) const;
  std::size_t node_offset(std::size_t segment) const { return edge_offset_[segment]; }
  std::size_t edge_offset(std::size_t segment) const { return edge_offset_[segment]; }
  std::size_t node_index(std::size_t segment, std::size_t local) const;

  void eval_nodes(double x, bool with_deriv, Active1D& out) const;
  void eval_edges(double x, bool with_deriv, Active1D& out) const;

  std::vector<double> nodal_values(double x) const;
  std::vector<double> edge_values(double x) const;

 private:
  std::vector<Basis1D> segments_;
  std::vector<EdgeBasis1D> edge_segments_;
  bool periodic_ = false;
  int degree_ = 0;
  std::size_t num_nodes_ = 0;
  std::size_t num_edges_ = 0;
  std::vector<std::size_t> edge_offset_;
  std::vector<double> breakpoints_;
  std::vector<double> nodes_;
  std::vector<std::pair<double, double>> edges_;
};

}  // namespace mimetic
