#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <functional>
#include <memory>
#include <vector>

#include "mimetic/geometry.hpp"
#include "mimetic/projection.hpp"
#include "mimetic/spaces.hpp"

namespace mimetic {

/// Element partition and Gauss rule used for integrals over a mapped 2D tensor space.
struct ElementQuadrature {
  std::array<std::vector<double>, 2> cuts;  // element boundaries per axis
  std::array<int, 2> points{};              // Gauss points per axis per element
};

/// Elements are the cells of the merged field and geometry breakpoints; the rule has
/// p_geom + p_field + 1 points per axis, or `points` when positive.
ElementQuadrature element_quadrature(const TensorSpace& space, const Geometry& geometry, int points = 0);

struct MassMatrix {
  int k = 0;
  Eigen::SparseMatrix<double> matrix;
};

/// (α_i, α_j) over the mapped domain: weight det J for 0-forms, G^{-1} det J with
/// G = J^T J for 1-forms, 1 / det J for 2-forms. Elements run in parallel and are
/// merged in element order, so the result does not depend on the thread count.
MassMatrix assemble_mass(const DiscreteFormSpace& space, const Geometry& geometry, int points = 0);
/// The same integrals accumulated point by point in a plain serial loop.
MassMatrix assemble_mass_serial(const DiscreteFormSpace& space, const Geometry& geometry, int points = 0);

/// Gauss points per axis per element for load vectors and normal-velocity data.
inline constexpr int kLoadMinPoints = 12;

/// Load vector (β_i, f) for a physical form f given as functions of (x, y, 0), with
/// at least kLoadMinPoints points per axis unless `points` is set.
Eigen::VectorXd assemble_load(const DiscreteFormSpace& space, const Geometry& geometry, const FormFunction& f,
                              int points = 0);

/// Velocity boundary data as the physical flux-form 1-form a = a_x dx + a_y dy; the
/// physical velocity is (a_y, -a_x), so a·n is the tangential velocity along the
/// counterclockwise boundary tangent with a sign flip, and the line integral of a
/// along the boundary is the outward normal flux.
using BoundaryField = std::function<Eigen::Vector2d(const Point& x)>;

/// Vorticity-velocity-pressure saddle system in 2D,
///   [ -ν M0      ν D10^T M1   0        ] [ω]   [ν B1]
///   [ ν M1 D10   0            D21^T M2 ] [u] = [F   ]
///   [ 0          M2 D21       0        ] [p]   [0   ]
/// with ω in Λ⁰, u in Λ¹, p in Λ².
struct SaddleSystem {
  std::shared_ptr<const DiscreteFormSpace> space0, space1, space2;
  std::shared_ptr<const Geometry> geometry;
  double nu = 1.0;
  int points = 0;
  MassMatrix M0, M1, M2;
  Eigen::SparseMatrix<double> D10, D21;
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  /// Prescribed unknowns (global numbering) and their values.
  std::vector<bool> constrained;
  Eigen::VectorXd constrained_values;
  /// Zero-mean pressure multiplier, needed when the whole boundary carries normal data.
  bool gauge = false;

  std::size_t n0() const { return space0->dimension(); }
  std::size_t n1() const { return space1->dimension(); }
  std::size_t n2() const { return space2->dimension(); }
  std::size_t size() const { return n0() + n1() + n2(); }
};

/// Assemble the operator and the forcing block F = (β, f). The spaces must share one
/// 2D tensor space.
SaddleSystem assemble_vvp(std::shared_ptr<const TensorSpace> space, std::shared_ptr<const Geometry> geometry,
                          double nu, const FormFunction& forcing, int points = 0);

/// Boundary Λ¹ coefficients: per side, the histopolation of the pulled-back data's
/// edge integrals along the side. Returns (global u index, value) pairs.
std::vector<std::pair<std::size_t, double>> normal_velocity_dofs(const SaddleSystem& system, const BoundaryField& a);

/// Fix the boundary velocity coefficients; rows and columns are eliminated
/// symmetrically at solve time. Throws FluxImbalanceError when the prescribed net
/// flux of the enclosed flow is not zero.
void apply_strong_normal_velocity(SaddleSystem& system, const BoundaryField& a);

/// B1(α) = ∮ α (a·n) ds, integrated with the mass matrix rule along each side.
Eigen::VectorXd tangential_boundary_vector(const SaddleSystem& system, const BoundaryField& a);
void apply_weak_tangential_velocity(SaddleSystem& system, const BoundaryField& a);

struct Solution {
  Eigen::VectorXd omega, u, p;
  double residual = 0.0;   // ‖Kx - b‖∞ / ‖b‖∞ of the reduced system
  double multiplier = 0.0;  // pressure gauge multiplier
};

Solution solve(const SaddleSystem& system);

/// Largest |A - A^T| entry relative to the largest |A| entry.
double asymmetry(const Eigen::SparseMatrix<double>& A);

}  // namespace mimetic
