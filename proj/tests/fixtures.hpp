#pragma once

// Small builders shared by the tests.

#include <memory>
#include <random>
#include <vector>

#include "mimetic/spaces.hpp"
#include "mimetic/splines.hpp"
#include "mimetic/univariate.hpp"

namespace fixture {

/// Open knot vector on [0,1] with `spans` nonuniform spans.
inline mimetic::KnotVector random_knots(int p, int spans, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::vector<double> cuts{0.0};
  for (int i = 0; i < spans; ++i) cuts.push_back(cuts.back() + u(rng));
  std::vector<double> t(p, 0.0);
  for (double c : cuts) t.push_back(c / cuts.back());
  t.back() = 1.0;
  t.insert(t.end(), p, 1.0);
  return mimetic::KnotVector(t, p);
}

inline std::vector<double> random_weights(std::size_t n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::vector<double> w(n);
  for (auto& x : w) x = u(rng);
  return w;
}

inline mimetic::Basis1D basis(int p, int spans, std::mt19937* rng = nullptr, bool rational = false) {
  auto kv = rng ? random_knots(p, spans, *rng) : mimetic::KnotVector::uniform(p, spans);
  if (rational) {
    const auto n = kv.num_basis();
    return mimetic::Basis1D(std::move(kv), random_weights(n, *rng));
  }
  return mimetic::Basis1D(std::move(kv));
}

inline std::shared_ptr<const mimetic::TensorSpace> tensor(std::vector<mimetic::Basis1D> bases) {
  std::vector<mimetic::SplineSpace1D> dirs;
  for (auto& b : bases) dirs.emplace_back(std::move(b));
  return std::make_shared<const mimetic::TensorSpace>(std::move(dirs));
}

inline std::shared_ptr<const mimetic::TensorSpace> uniform_tensor(std::vector<int> p, std::vector<int> spans) {
  std::vector<mimetic::Basis1D> b;
  for (std::size_t a = 0; a < p.size(); ++a) b.push_back(basis(p[a], spans[a]));
  return tensor(std::move(b));
}

inline std::shared_ptr<const mimetic::DiscreteFormSpace> form_space(std::shared_ptr<const mimetic::TensorSpace> t,
                                                                    int k) {
  return std::make_shared<const mimetic::DiscreteFormSpace>(std::move(t), k);
}

inline Eigen::VectorXd random_vector(std::size_t n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

/// Integer-valued coefficients, so sums of them are exact in floating point.
inline Eigen::VectorXd random_integers(std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<int> u(-1000, 1000);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline mimetic::Point random_point(int d, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  mimetic::Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < d; ++a) x[a] = u(rng);
  return x;
}

}  // namespace fixture
