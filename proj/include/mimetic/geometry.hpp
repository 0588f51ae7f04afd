#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "mimetic/projection.hpp"
#include "mimetic/spaces.hpp"
#include "mimetic/splines.hpp"

namespace mimetic {

/// A 2D parametric map Φ from a parametric box onto a physical region.
class Geometry {
 public:
  virtual ~Geometry() = default;
  virtual Eigen::Vector2d map_point(const Point& u) const = 0;
  /// Columns are ∂Φ/∂u_0 and ∂Φ/∂u_1.
  virtual Eigen::Matrix2d jacobian(const Point& u) const = 0;
  /// Parametric element boundaries along an axis; the map is smooth between them.
  virtual std::vector<double> breakpoints(int axis) const = 0;
  /// Polynomial degree of the map along an axis (before the rational division).
  virtual int degree(int axis) const = 0;
};

/// det J, throwing when it is not strictly positive.
double checked_det(const Eigen::Matrix2d& J);

/// Tensor-product NURBS surface. Control points and weights are numbered with the
/// first parametric direction fastest.
class NurbsPatch : public Geometry {
 public:
  NurbsPatch(KnotVector u, KnotVector v, std::vector<Eigen::Vector2d> control, std::vector<double> weights = {});

  Eigen::Vector2d map_point(const Point& u) const override;
  Eigen::Matrix2d jacobian(const Point& u) const override;
  std::vector<double> breakpoints(int axis) const override;
  int degree(int axis) const override { return knot_vector(axis).degree(); }

  const KnotVector& knot_vector(int axis) const { return axis == 0 ? u_.knot_vector() : v_.knot_vector(); }
  std::size_t count(int axis) const { return axis == 0 ? u_.size() : v_.size(); }
  const Eigen::Vector2d& control_point(std::size_t i, std::size_t j) const { return control_[i + count(0) * j]; }
  double weight(std::size_t i, std::size_t j) const { return weights_[i + count(0) * j]; }

 private:
  void evaluate(const Point& u, Eigen::Vector2d& x, Eigen::Matrix2d* J) const;

  Basis1D u_, v_;
  std::vector<Eigen::Vector2d> control_;
  std::vector<double> weights_;
};

enum class Side { u_lo, u_hi, v_lo, v_hi };

/// Conforming contact between two patch sides; `reversed` flips the parametrization of side b.
struct Interface {
  std::size_t patch_a;
  Side side_a;
  std::size_t patch_b;
  Side side_b;
  bool reversed = false;
};

/// Patches chained along the first parametric direction: patch q covers global
/// parameters [q, q+1] x [0, 1] (each patch's own knot range rescaled to unit length).
/// A closed chain joins the last patch back to the first.
class MultiPatch : public Geometry {
 public:
  MultiPatch(std::vector<NurbsPatch> patches, std::vector<Interface> interfaces);

  Eigen::Vector2d map_point(const Point& u) const override;
  Eigen::Matrix2d jacobian(const Point& u) const override;
  std::vector<double> breakpoints(int axis) const override;
  int degree(int axis) const override;

  const std::vector<NurbsPatch>& patches() const noexcept { return patches_; }
  const std::vector<Interface>& interfaces() const noexcept { return interfaces_; }
  /// Patch index and patch-local parameter of a global parameter.
  std::pair<std::size_t, Point> locate(const Point& u) const;

 private:
  std::vector<NurbsPatch> patches_;
  std::vector<Interface> interfaces_;
};

/// Φ(u) = u on [0,1]^2.
std::shared_ptr<NurbsPatch> identity_square();
/// Φ(u) = (sx u_0, sy u_1).
std::shared_ptr<NurbsPatch> affine_square(double sx, double sy);
/// Bicubic patch with `spans` x `spans` uniform spans whose control points are the
/// Greville grid moved by x = u + a sin(2πu) sin(2πv), y = v + a sin(2πu) sin(2πv).
std::shared_ptr<NurbsPatch> curved_square(double amplitude = 0.1, int spans = 4, int degree = 3);
/// Quarter of the annulus 1 <= r <= 2, degree (2, 1). The angular direction runs
/// clockwise from angle -q π/2, so that det J > 0 with the outward radial direction.
NurbsPatch quarter_annulus(int q, double r_in = 1.0, double r_out = 2.0);
/// Four quarter patches closed into the full annulus.
std::shared_ptr<MultiPatch> build_taylor_couette(double r_in = 1.0, double r_out = 2.0);

/// Reference components of the pullback of a form with physical components `phys`
/// (0-form: value; 1-form: J^T a; 2-form: det J a).
std::vector<double> pullback_components(int k, const Geometry& g, const Point& u, const std::vector<double>& phys);
/// Inverse of pullback_components.
std::vector<double> pushforward_components(int k, const Geometry& g, const Point& u, const std::vector<double>& ref);
/// Pullback of a form whose components are functions of the physical point (x, y, 0).
/// The geometry must outlive the result.
FormFunction pullback(const FormFunction& physical, const Geometry& g);

}  // namespace mimetic
