#include "mimetic/checks.hpp"

#include <Eigen/SparseCholesky>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "mimetic/assembly.hpp"
#include "mimetic/harness.hpp"
#include "mimetic/projection.hpp"
#include "mimetic/quadrature.hpp"
#include "mimetic/topology.hpp"

namespace mimetic {

namespace {

std::string sci(double v) {
  std::ostringstream s;
  s.precision(2);
  s << std::scientific << v;
  return s.str();
}

KnotVector random_knot_vector(int p, int spans, std::mt19937& rng) {
  std::uniform_real_distribution<double> len(0.2, 1.0);
  std::vector<double> cuts{0.0};
  for (int i = 0; i < spans; ++i) cuts.push_back(cuts.back() + len(rng));
  std::vector<double> t(p, 0.0);
  for (double c : cuts) t.push_back(c / cuts.back());
  t.back() = 1.0;
  t.insert(t.end(), p, 1.0);
  return KnotVector(std::move(t), p);
}

CheckResult incidence_exactness() {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-5, 5);
  long long worst = 0;
  int cochains = 0;
  for (int d = 1; d <= 3; ++d) {
    for (std::size_t n = 1; n <= 4; ++n) {
      CellComplex c(std::vector<std::size_t>(d, n));
      for (int k = 2; k <= d; ++k) {
        const auto lo = build_incidence(c, k - 1), hi = build_incidence(c, k);
        for (long long v : lo.multiply_dense(hi)) worst = std::max(worst, std::llabs(v));
        for (int r = 0; r < 100; ++r, ++cochains) {
          std::vector<long long> x(c.count(k));
          for (auto& v : x) v = coef(rng);
          for (long long v : lo.apply(hi.apply(x))) worst = std::max(worst, std::llabs(v));
        }
      }
    }
  }
  return {"incidence exactness", worst == 0,
          "max |E E| = " + std::to_string(worst) + " over grids up to 4x4x4, " + std::to_string(cochains) + " cochains"};
}

CheckResult edge_function_identities() {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  double pou = 0.0, integral = 0.0;
  const auto& rule = gauss_legendre(30);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 1 + trial % 5;
    auto kv = random_knot_vector(p, 3 + trial % 4, rng);
    std::vector<double> weights(kv.num_basis());
    for (auto& x : weights) x = w(rng);
    const Basis1D basis = trial % 2 ? Basis1D(kv, weights) : Basis1D(kv);
    const EdgeBasis1D edge(basis);
    std::vector<double> ints(edge.size(), 0.0);
    const auto breaks = kv.breakpoints();
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
      const double h = 0.5 * (breaks[s + 1] - breaks[s]);
      for (std::size_t g = 0; g < rule.size(); ++g) {
        const double x = breaks[s] + h * (1.0 + rule.points[g]);
        double sum = 0.0;
        for (double v : basis.eval_nodal(x)) sum += v;
        pou = std::max(pou, std::abs(sum - 1.0));
        const auto m = edge.eval_edge(x);
        for (std::size_t i = 0; i < m.size(); ++i) ints[i] += h * rule.weights[g] * m[i];
      }
    }
    for (double v : ints) integral = std::max(integral, std::abs(v - 1.0));
  }
  return {"edge function identities", pou < 1e-14 && integral < 1e-12,
          "|sum N - 1| = " + sci(pou) + ", |int M - 1| = " + sci(integral) + " over 20 configurations"};
}

CheckResult commuting_projection() {
  std::mt19937 rng(3);
  double worst = 0.0;
  const ScalarFunction f = [](const Point& x) { return std::sin(2 * x[0] + 1) * std::cos(3 * x[1]) + x[0] * x[0] * x[1]; };
  const ScalarFunction fx = [](const Point& x) { return 2 * std::cos(2 * x[0] + 1) * std::cos(3 * x[1]) + 2 * x[0] * x[1]; };
  const ScalarFunction fy = [](const Point& x) { return -3 * std::sin(2 * x[0] + 1) * std::sin(3 * x[1]) + x[0] * x[0]; };
  const ScalarFunction gx = [](const Point& x) { return std::cos(x[0] - 2 * x[1]); };
  const ScalarFunction gy = [](const Point& x) { return std::exp(0.5 * x[0]) * x[1]; };
  const ScalarFunction dg = [](const Point& x) { return 0.5 * std::exp(0.5 * x[0]) * x[1] - 2 * std::sin(x[0] - 2 * x[1]); };
  auto rel = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
  };
  for (int p = 1; p <= 4; ++p) {
    // 1D
    {
      std::vector<SplineSpace1D> dirs{SplineSpace1D(Basis1D(random_knot_vector(p, 5, rng)))};
      auto t = std::make_shared<const TensorSpace>(std::move(dirs));
      auto s0 = std::make_shared<const DiscreteFormSpace>(t, 0), s1 = std::make_shared<const DiscreteFormSpace>(t, 1);
      const auto a = exterior_derivative(project_form({0, {f}}, s0));
      const auto b = project_form({1, {fx}}, s1);
      worst = std::max(worst, rel(a.coeffs(), b.coeffs()));
    }
    // 2D, 0 -> 1 and 1 -> 2
    std::vector<SplineSpace1D> dirs{SplineSpace1D(Basis1D(random_knot_vector(p, 4, rng))),
                                    SplineSpace1D(Basis1D(random_knot_vector(p, 5, rng)))};
    auto t = std::make_shared<const TensorSpace>(std::move(dirs));
    auto s0 = std::make_shared<const DiscreteFormSpace>(t, 0), s1 = std::make_shared<const DiscreteFormSpace>(t, 1),
         s2 = std::make_shared<const DiscreteFormSpace>(t, 2);
    worst = std::max(worst, rel(exterior_derivative(project_form({0, {f}}, s0)).coeffs(),
                                project_form({1, {fx, fy}}, s1).coeffs()));
    worst = std::max(worst, rel(exterior_derivative(project_form({1, {gx, gy}}, s1)).coeffs(),
                                project_form({2, {dg}}, s2).coeffs()));
  }
  return {"commuting projection", worst < 1e-10, "max relative |d pi f - pi d f| = " + sci(worst) + ", degrees 1-4, 1D/2D"};
}

std::vector<std::pair<std::string, SaddleSystem>> test_meshes() {
  std::vector<std::pair<std::string, SaddleSystem>> out;
  const FormFunction zero{1, {[](const Point&) { return 0.0; }, [](const Point&) { return 0.0; }}};
  for (const char* g : {"unit-square", "curved-square", "annulus"}) {
    CaseConfig c = default_config(std::string(g) == "annulus" ? "taylor-couette" : "manufactured");
    c.geometry = g;
    out.emplace_back(g, assemble_vvp(make_field_space(c, 8), make_geometry(g), 1.0, zero));
  }
  const auto cavity = default_config("cavity");
  out.emplace_back("cavity 9x9", assemble_vvp(make_field_space(cavity, 9), make_geometry("cavity"), 1.0, zero));
  return out;
}

CheckResult operator_symmetry() {
  double worst = 0.0;
  for (const auto& [name, s] : test_meshes()) worst = std::max(worst, asymmetry(s.matrix));
  return {"operator symmetry", worst < 1e-12, "max relative asymmetry " + sci(worst) + " on 4 meshes"};
}

CheckResult mass_definiteness() {
  bool ok = true;
  double sym = 0.0;
  for (const auto& [name, s] : test_meshes()) {
    for (const auto* m : {&s.M0, &s.M1, &s.M2}) {
      sym = std::max(sym, asymmetry(m->matrix));
      Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(m->matrix);
      ok = ok && llt.info() == Eigen::Success;
    }
  }
  return {"mass matrices SPD", ok && sym < 1e-12, "Cholesky " + std::string(ok ? "succeeds" : "fails") +
                                                       ", max asymmetry " + sci(sym)};
}

CheckResult manufactured_divergence() {
  double cochain = 0.0, pointwise = 0.0;
  for (const char* g : {"unit-square", "curved-square"}) {
    for (int p = 1; p <= 3; ++p) {
      CaseConfig c = default_config("manufactured");
      c.geometry = g;
      c.degree = p;
      for (const auto& r : run_manufactured(c)) {
        cochain = std::max(cochain, r.div_max);
        pointwise = std::max(pointwise, r.div_pointwise);
      }
    }
  }
  return {"divergence-free velocity", cochain < 1e-10 && pointwise < 1e-9,
          "max |D21 u| = " + sci(cochain) + ", max |div u_h| = " + sci(pointwise) + ", 4->32 spans, p = 1-3, 2 grids"};
}

CheckResult taylor_couette_pressure() {
  double deviation = 0.0, speed = 0.0;
  bool decreasing = true;
  for (int p = 1; p <= 3; ++p) {
    CaseConfig c = default_config("taylor-couette");
    c.degree = p;
    const auto records = run_taylor_couette(c);
    for (std::size_t l = 0; l < records.size(); ++l) {
      deviation = std::max(deviation, records[l].pressure_deviation);
      speed = std::max({speed, records[l].speed_inner, records[l].speed_outer});
      if (l > 0)
        decreasing = decreasing && records[l].speed_inner < records[l - 1].speed_inner &&
                     records[l].speed_outer < records[l - 1].speed_outer;
    }
  }
  return {"Taylor-Couette pressure and boundary speeds", deviation < 1e-10 && decreasing,
          "max pressure deviation " + sci(deviation) + ", boundary speed error <= " + sci(speed) +
              (decreasing ? " and decreasing" : " but not decreasing")};
}

CheckResult cavity_stream_function() {
  CaseConfig c = default_config("cavity");
  const auto level = solve_level(c, 9);
  double residual = 0.0;
  stream_function(level, &residual);
  const double flux = (level.system.D21 * level.solution.u).cwiseAbs().maxCoeff();
  return {"cavity stream function", residual < 1e-10 && flux < 1e-10,
          "potential residual " + sci(residual) + ", max |D21 u| = " + sci(flux)};
}

}  // namespace

std::vector<CheckResult> run_property_suite(std::ostream* log) {
  const std::vector<std::function<CheckResult()>> checks{
      incidence_exactness,     edge_function_identities, commuting_projection,    mass_definiteness,
      operator_symmetry,       manufactured_divergence,  taylor_couette_pressure, cavity_stream_function};
  std::vector<CheckResult> out;
  for (const auto& check : checks) {
    const auto start = std::chrono::steady_clock::now();
    auto r = check();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (log) {
      std::ostringstream t;
      t.precision(2);
      t << std::fixed << seconds;
      *log << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << " (" << t.str() << " s)" << std::endl;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace mimetic
