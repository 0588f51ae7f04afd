#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "mimetic/errors.hpp"
#include "mimetic/harness.hpp"
#include "oracles.hpp"

using namespace mimetic;
using std::numbers::pi;

namespace {

double fd(const std::function<double(double)>& f, double x) { return oracle::central_diff(f, x, 1e-5); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> row;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("mimetic_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("manufactured solution") {
  CHECK(std::abs(manufactured::omega({0.25, 0.25, 0}) + 4 * pi) < 1e-12);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  for (int i = 0; i < 50; ++i) {
    const double x = U(rng), y = U(rng);
    auto at = [](auto f, double a, double b) { return f(Point{a, b, 0}); };
    // ω = -div of the flux-form velocity, and f = dω + δp.
    const double div = fd([&](double s) { return at(manufactured::ux, s, y); }, x) +
                       fd([&](double s) { return at(manufactured::uy, x, s); }, y);
    CHECK(std::abs(manufactured::omega({x, y, 0}) + div) < 1e-8);
    const double wx = fd([&](double s) { return at(manufactured::omega, s, y); }, x);
    const double wy = fd([&](double s) { return at(manufactured::omega, x, s); }, y);
    const double px = fd([&](double s) { return at(manufactured::pressure, s, y); }, x);
    const double py = fd([&](double s) { return at(manufactured::pressure, x, s); }, y);
    CHECK(std::abs(manufactured::fx({x, y, 0}) - (wx + py)) < 1e-7);
    CHECK(std::abs(manufactured::fy({x, y, 0}) - (wy - px)) < 1e-7);
  }
}

TEST_CASE("Taylor-Couette exact field") {
  CHECK(std::abs(taylor_couette::speed(1.0) - 1.0) < 1e-15);
  CHECK(std::abs(taylor_couette::speed(2.0)) < 1e-15);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> R(1.1, 1.9), T(0.0, 2 * pi);
  for (int i = 0; i < 50; ++i) {
    const double r = R(rng), t = T(rng), x = r * std::cos(t), y = r * std::sin(t);
    const auto a = taylor_couette::velocity_form({x, y, 0});
    // Physical velocity (a_y, -a_x) is counterclockwise with speed g(r).
    CHECK(std::abs(a[1] * (-std::sin(t)) - a[0] * std::cos(t) - taylor_couette::speed(r)) < 1e-14);
    const double div = fd([&](double s) { return taylor_couette::velocity_form({s, y, 0})[0]; }, x) +
                       fd([&](double s) { return taylor_couette::velocity_form({x, s, 0})[1]; }, y);
    CHECK(std::abs(-div - taylor_couette::kOmega) < 1e-8);
  }
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(default_config("poiseuille"), ArgumentError);
  auto c = default_config("manufactured");
  CHECK_NOTHROW(validate(c));
  auto bad = c;
  bad.degree = 0;
  CHECK_THROWS_AS(validate(bad), ArgumentError);
  bad = c;
  bad.levels = 0;
  CHECK_THROWS_AS(validate(bad), ArgumentError);
  bad = c;
  bad.geometry = "annulus";
  CHECK_THROWS_AS(validate(bad), ArgumentError);
  bad = c;
  bad.nu = -1.0;
  CHECK_THROWS_AS(validate(bad), ArgumentError);
  bad = default_config("cavity");
  bad.spans.clear();
  CHECK_THROWS_AS(validate(bad), ArgumentError);
  CHECK_THROWS_AS(run_taylor_couette(c), ArgumentError);
  CHECK(default_config("taylor-couette").geometry == "annulus");
  CHECK(default_config("cavity").degree == 3);
}

TEST_CASE("rates") {
  const std::vector<double> h{0.5, 0.25, 0.125, 0.0625};
  std::vector<double> e;
  for (double x : h) e.push_back(3.0 * std::pow(x, 2.5));
  CHECK(std::abs(fit_rate(h, e) - 2.5) < 1e-12);
  e.front() = 1e3;  // outside the last three levels
  CHECK(std::abs(fit_rate(h, e) - 2.5) < 1e-12);
  CHECK_THROWS_AS(fit_rate({0.5}, {1.0}), ArgumentError);
}

TEST_CASE("h_max and field knots") {
  auto c = default_config("manufactured");
  CHECK(std::abs(h_max(*make_field_space(c, 4), *make_geometry("unit-square")) - 0.25) < 1e-15);
  c.geometry = "curved-square";
  double prev = 1e9;
  for (int s : {4, 8, 16, 32}) {
    const double h = h_max(*make_field_space(c, s), *make_geometry(c.geometry));
    CHECK(h < prev);
    prev = h;
  }
  c = default_config("taylor-couette");
  // Coarsest annulus level: one element per quarter and 4 radially.
  CHECK(h_max(*make_field_space(c, 4), *make_geometry("annulus")) > 1.0);

  // Degree-4 fields on the cubic curved grid are C2 at the geometry knots.
  const auto kv = conforming_knots(4, 8, {0.0, 0.25, 0.5, 0.75, 1.0}, 3);
  int at_quarter = 0, at_eighth = 0;
  for (double t : kv.knots()) {
    at_quarter += std::abs(t - 0.25) < 1e-15;
    at_eighth += std::abs(t - 0.125) < 1e-15;
  }
  CHECK(at_quarter == 2);
  CHECK(at_eighth == 1);
  CHECK(conforming_knots(2, 8, {0.0, 0.25, 0.5, 0.75, 1.0}, 3).knots().size() == 2 * 3 + 7);
}

TEST_CASE("error measurement") {
  auto c = default_config("manufactured");
  c.degree = 2;
  const auto level = solve_level(c, 8);
  const auto base = measure_level(c, level, 2);
  const auto doubled = measure_level(c, level, 2 + 2 * 2 + 5);  // 2 (p_g + p_f + 3) points
  CHECK(std::abs(doubled.err_w / base.err_w - 1) < 1e-3);
  CHECK(std::abs(doubled.err_u / base.err_u - 1) < 1e-3);
  CHECK(std::abs(doubled.err_p / base.err_p - 1) < 1e-3);

  // Independent route: Simpson on the unit square (grid lines on every knot).
  const auto u = level.velocity();
  const double eu2 = oracle::simpson2d(
      [&](double x, double y) {
        const auto a = eval(u, {x, y, 0});
        return std::pow(a[0] - manufactured::ux({x, y, 0}), 2) + std::pow(a[1] - manufactured::uy({x, y, 0}), 2);
      },
      0, 1, 0, 1, 1600);
  CHECK(std::abs(std::sqrt(eu2) / base.err_u - 1) < 1e-6);
  CHECK(base.dof == level.system.size());
  CHECK(base.div_max < 1e-12);
  CHECK(base.residual < 1e-10);
}

TEST_CASE("monotone convergence at degree 2") {
  for (const char* name : {"manufactured", "taylor-couette"}) {
    auto c = default_config(name);
    c.degree = 2;
    c.levels = 3;
    const auto records = name == std::string("manufactured") ? run_manufactured(c) : run_taylor_couette(c);
    REQUIRE(records.size() == 3);
    for (std::size_t l = 1; l < records.size(); ++l) {
      CHECK(records[l].h_max < records[l - 1].h_max);
      CHECK(records[l].err_u < records[l - 1].err_u);
      if (name == std::string("manufactured")) {
        CHECK(records[l].err_w < records[l - 1].err_w);
        CHECK(records[l].err_p < records[l - 1].err_p);
      }
    }
  }
}

TEST_CASE("stream function") {
  auto c = default_config("manufactured");
  c.degree = 1;
  const auto level = solve_level(c, 6);
  double residual = 1.0;
  const auto psi = stream_function(level, &residual);
  CHECK(residual < 1e-10);
  CHECK(psi[0] == 0.0);
  CHECK((level.system.D10 * psi - level.solution.u).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("cavity run") {
  auto c = default_config("cavity");
  c.degree = 2;
  const auto run = run_cavity(c, 6);
  REQUIRE(run.coord.size() == 101);
  CHECK(run.horizontal.size() == 101);
  CHECK(run.vertical.size() == 101);
  CHECK(run.fields.nx == 101);
  CHECK(run.fields.values.back().size() == 101 * 101);
  CHECK(run.fields.names.back() == "psi");
  CHECK(run.stream_residual < 1e-10);
  CHECK(std::abs(run.horizontal.front()) < 0.05);  // no-slip bottom, weakly imposed
  MESSAGE("lid velocity at (0.5, 1): " << run.horizontal.back());

  const auto same = profile_deviation(run.coord, run.horizontal, run.horizontal);
  CHECK(same.max_relative == 0.0);
  CHECK(same.integral_relative == 0.0);
  std::vector<double> scaled = run.horizontal;
  for (auto& v : scaled) v *= 1.1;
  const auto d = profile_deviation(run.coord, scaled, run.horizontal);
  CHECK(std::abs(d.max_relative - 0.1) < 1e-12);
  CHECK(std::abs(d.integral_relative - 0.1) < 1e-12);
}

TEST_CASE("output files") {
  auto c = default_config("manufactured");
  c.degree = 1;
  c.levels = 3;
  c.out_dir = scratch("a").string();
  const auto result = run_case(c);
  emit_outputs(result);
  const auto rows = read_csv(std::filesystem::path(c.out_dir) / "convergence.csv");
  REQUIRE(rows.size() == 1 + 3);
  const std::vector<std::string> head{"level", "h_max", "dof", "err_w", "err_u", "err_p", "div_max",
                                      "rate_w", "rate_u", "rate_p"};
  for (std::size_t i = 0; i < head.size(); ++i) CHECK(rows[0][i] == head[i]);
  for (std::size_t l = 2; l < rows.size(); ++l) {
    for (int col : {3, 4, 5}) {
      const double expected = std::log(std::stod(rows[l][col]) / std::stod(rows[l - 1][col])) /
                              std::log(std::stod(rows[l][1]) / std::stod(rows[l - 1][1]));
      CHECK(std::abs(std::stod(rows[l][col + 4]) - expected) < 1e-12);
    }
  }
  CHECK(rows[1][7] == "nan");
  const auto meta = slurp(std::filesystem::path(c.out_dir) / "run.txt");
  CHECK(meta.find("case=manufactured") != std::string::npos);
  CHECK(meta.find("version=") != std::string::npos);
  CHECK(meta.find("git=") != std::string::npos);

  // Identical configuration, bit-identical files.
  auto again = c;
  again.out_dir = scratch("b").string();
  emit_outputs(run_case(again));
  for (const char* f : {"convergence.csv", "fields.dat"})
    CHECK(slurp(std::filesystem::path(c.out_dir) / f) == slurp(std::filesystem::path(again.out_dir) / f));

  auto bad = c;
  bad.out_dir = "/proc/mimetic-cannot-write";
  CHECK_THROWS(emit_outputs(CaseResult{bad, result.records, {}, result.fields}));
}
