#pragma once

#include <vector>

namespace mimetic {

/// Gauss–Legendre points and weights on an interval.
struct QuadratureRule1D {
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// n-point Gauss–Legendre rule on [-1, 1], exact for polynomials of degree 2n-1.
/// Rules are computed once per n and cached.
const QuadratureRule1D& gauss_legendre(int n);

/// The n-point rule affinely mapped onto [a, b].
QuadratureRule1D gauss_legendre(int n, double a, double b);

}  // namespace mimetic
