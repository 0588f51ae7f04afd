#include "mimetic/harness.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "mimetic/errors.hpp"
#include "mimetic/quadrature.hpp"

namespace mimetic {

using std::numbers::pi;

namespace manufactured {
double omega(const Point& x) { return -4 * pi * std::sin(2 * pi * x[0]) * std::sin(2 * pi * x[1]); }
double ux(const Point& x) { return -std::cos(2 * pi * x[0]) * std::sin(2 * pi * x[1]); }
double uy(const Point& x) { return -std::sin(2 * pi * x[0]) * std::cos(2 * pi * x[1]); }
double pressure(const Point& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); }
// f = dω + δp with δp = (∂_y p, -∂_x p).
double fx(const Point& x) {
  return -8 * pi * pi * std::cos(2 * pi * x[0]) * std::sin(2 * pi * x[1]) + pi * std::sin(pi * x[0]) * std::cos(pi * x[1]);
}
double fy(const Point& x) {
  return -8 * pi * pi * std::sin(2 * pi * x[0]) * std::cos(2 * pi * x[1]) - pi * std::cos(pi * x[0]) * std::sin(pi * x[1]);
}
}  // namespace manufactured

namespace taylor_couette {
double speed(double r) { return -r / 3.0 + 4.0 / (3.0 * r); }
// Counterclockwise azimuthal flow of speed g(r) as a flux form: -g (cosθ dx + sinθ dy).
Eigen::Vector2d velocity_form(const Point& x) {
  const double r = std::hypot(x[0], x[1]);
  const double g = speed(r);
  return {-g * x[0] / r, -g * x[1] / r};
}
}  // namespace taylor_couette

namespace {

struct Exact {
  ScalarFunction omega;
  BoundaryField velocity;
  ScalarFunction pressure;
};

Exact exact_solution(const CaseConfig& c) {
  if (c.name == "manufactured")
    return {manufactured::omega, [](const Point& x) { return Eigen::Vector2d(manufactured::ux(x), manufactured::uy(x)); },
            manufactured::pressure};
  if (c.name == "taylor-couette")
    return {[](const Point&) { return taylor_couette::kOmega; }, taylor_couette::velocity_form,
            [](const Point&) { return 0.0; }};
  throw ArgumentError("no analytic solution for case '" + c.name + "'");
}

Eigen::Vector2d lid(const Point& x) { return {0.0, x[1] > 1.0 - 1e-9 ? 1.0 : 0.0}; }

Point physical(const Geometry& g, const Point& u) {
  const Eigen::Vector2d x = g.map_point(u);
  return {x[0], x[1], 0.0};
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<std::string> case_names() { return {"manufactured", "taylor-couette", "cavity"}; }

CaseConfig default_config(const std::string& name) {
  CaseConfig c;
  c.name = name;
  if (name == "manufactured") {
    c.geometry = "unit-square";
  } else if (name == "taylor-couette") {
    c.geometry = "annulus";
  } else if (name == "cavity") {
    c.geometry = "cavity";
    c.degree = 3;
    c.levels = 1;
  } else {
    throw ArgumentError("unknown case '" + name + "'");
  }
  return c;
}

void validate(const CaseConfig& c) {
  const auto names = case_names();
  if (std::find(names.begin(), names.end(), c.name) == names.end()) throw ArgumentError("unknown case '" + c.name + "'");
  if (c.degree < 1 || c.degree + 1 > LocalBasis::kMaxDegree) throw ArgumentError("degree must be in [1, 14]");
  if (c.levels < 1) throw ArgumentError("levels must be at least 1");
  if (!(c.nu > 0.0) || !std::isfinite(c.nu)) throw ArgumentError("nu must be positive");
  if (c.quad < 0) throw ArgumentError("quad must be non-negative");
  if (c.base_spans < 1) throw ArgumentError("base spans must be at least 1");
  if (c.name == "manufactured" && c.geometry != "unit-square" && c.geometry != "curved-square")
    throw ArgumentError("manufactured case runs on unit-square or curved-square");
  if (c.name == "taylor-couette" && c.geometry != "annulus") throw ArgumentError("taylor-couette case runs on annulus");
  if (c.name == "cavity") {
    if (c.geometry != "cavity" && c.geometry != "unit-square") throw ArgumentError("cavity case runs on the unit square");
    if (c.spans.empty()) throw ArgumentError("cavity needs at least one span count");
    for (int s : c.spans)
      if (s < 1) throw ArgumentError("span counts must be positive");
  }
}

std::shared_ptr<const Geometry> make_geometry(const std::string& name) {
  if (name == "unit-square" || name == "cavity") return identity_square();
  if (name == "curved-square") return curved_square();
  if (name == "annulus") return build_taylor_couette();
  throw ArgumentError("unknown geometry '" + name + "'");
}

KnotVector conforming_knots(int p, int spans, const std::vector<double>& geometry_breaks, int geometry_degree) {
  const int smoothness = std::min(p - 1, geometry_degree - 1);
  std::vector<double> knots(p + 1, 0.0);
  for (int i = 1; i < spans; ++i) {
    const double t = static_cast<double>(i) / spans;
    const bool on_break = std::any_of(geometry_breaks.begin(), geometry_breaks.end(),
                                      [t](double b) { return std::abs(b - t) < 1e-12; });
    knots.insert(knots.end(), on_break ? p - smoothness : 1, t);
  }
  knots.insert(knots.end(), p + 1, 1.0);
  return KnotVector(std::move(knots), p);
}

std::shared_ptr<const TensorSpace> make_field_space(const CaseConfig& c, int spans) {
  const int p = c.degree + 1;
  std::vector<SplineSpace1D> dirs;
  if (c.geometry == "annulus") {
    const int per_patch = std::max(1, spans / 4);
    std::vector<Basis1D> segs;
    for (int q = 0; q < 4; ++q) segs.emplace_back(KnotVector::uniform(p, per_patch, q, q + 1));
    dirs.emplace_back(std::move(segs), true);
    dirs.emplace_back(Basis1D(KnotVector::uniform(p, spans)));
  } else {
    const auto g = make_geometry(c.geometry);
    for (int axis = 0; axis < 2; ++axis)
      dirs.emplace_back(Basis1D(conforming_knots(p, spans, g->breakpoints(axis), g->degree(axis))));
  }
  return std::make_shared<const TensorSpace>(std::move(dirs));
}

LevelSolution solve_level(const CaseConfig& c, int spans) {
  validate(c);
  auto geometry = make_geometry(c.geometry);
  auto tensor = make_field_space(c, spans);
  FormFunction forcing{1, {[](const Point&) { return 0.0; }, [](const Point&) { return 0.0; }}};
  BoundaryField data = lid;
  if (c.name == "manufactured") {
    forcing = {1, {manufactured::fx, manufactured::fy}};
    data = exact_solution(c).velocity;
  } else if (c.name == "taylor-couette") {
    data = taylor_couette::velocity_form;
  }
  auto system = assemble_vvp(tensor, geometry, c.nu, forcing, c.quad);
  apply_strong_normal_velocity(system, data);
  apply_weak_tangential_velocity(system, data);
  auto solution = solve(system);
  return {std::move(system), std::move(solution), std::move(tensor)};
}

double h_max(const TensorSpace& space, const Geometry& geometry) {
  const auto q = element_quadrature(space, geometry);
  double h = 0.0;
  for (std::size_t j = 0; j + 1 < q.cuts[1].size(); ++j) {
    for (std::size_t i = 0; i + 1 < q.cuts[0].size(); ++i) {
      const double u0 = q.cuts[0][i], u1 = q.cuts[0][i + 1], v0 = q.cuts[1][j], v1 = q.cuts[1][j + 1];
      const auto d1 = geometry.map_point({u1, v1, 0}) - geometry.map_point({u0, v0, 0});
      const auto d2 = geometry.map_point({u1, v0, 0}) - geometry.map_point({u0, v1, 0});
      h = std::max({h, d1.norm(), d2.norm()});
    }
  }
  return h / std::sqrt(2.0);
}

ConvergenceRecord measure_level(const CaseConfig& c, const LevelSolution& level, int extra_points) {
  const auto& sys = level.system;
  const Geometry& g = *sys.geometry;
  const Exact exact = exact_solution(c);
  const auto w_h = level.omega();
  const auto u_h = level.velocity();
  const auto p_h = level.pressure();

  auto q = element_quadrature(*level.tensor, g, sys.points);
  q.points[0] += extra_points;
  q.points[1] += extra_points;
  const auto& r0 = gauss_legendre(q.points[0]);
  const auto& r1 = gauss_legendre(q.points[1]);

  double ew = 0.0, eu = 0.0, area = 0.0, ph_int = 0.0, pe_int = 0.0;
  std::vector<double> dp, wt, ph_values;
  for (std::size_t j = 0; j + 1 < q.cuts[1].size(); ++j) {
    const double v0 = q.cuts[1][j], hv = q.cuts[1][j + 1] - v0;
    for (std::size_t i = 0; i + 1 < q.cuts[0].size(); ++i) {
      const double u0 = q.cuts[0][i], hu = q.cuts[0][i + 1] - u0;
      for (std::size_t b = 0; b < r1.size(); ++b) {
        for (std::size_t a = 0; a < r0.size(); ++a) {
          const Point u{u0 + 0.5 * hu * (1.0 + r0.points[a]), v0 + 0.5 * hv * (1.0 + r1.points[b]), 0.0};
          const double det = checked_det(g.jacobian(u));
          const double w = 0.25 * r0.weights[a] * r1.weights[b] * hu * hv * det;
          const Point x = physical(g, u);
          const double dw = eval(w_h, u)[0] - exact.omega(x);
          const auto a_h = pushforward_components(1, g, u, eval(u_h, u));
          const Eigen::Vector2d a_ex = exact.velocity(x);
          const double ph = pushforward_components(2, g, u, eval(p_h, u))[0];
          const double pe = exact.pressure(x);
          ew += w * dw * dw;
          eu += w * (std::pow(a_h[0] - a_ex[0], 2) + std::pow(a_h[1] - a_ex[1], 2));
          area += w;
          ph_int += w * ph;
          pe_int += w * pe;
          dp.push_back(ph - pe);
          wt.push_back(w);
          ph_values.push_back(ph);
        }
      }
    }
  }
  const double shift = (ph_int - pe_int) / area, ph_mean = ph_int / area;
  double ep = 0.0, deviation = 0.0;
  for (std::size_t n = 0; n < dp.size(); ++n) {
    ep += wt[n] * std::pow(dp[n] - shift, 2);
    deviation = std::max(deviation, std::abs(ph_values[n] - ph_mean));
  }

  ConvergenceRecord r;
  r.spans = static_cast<int>(level.tensor->direction(1).num_edges());
  r.h_max = h_max(*level.tensor, g);
  r.dof = sys.size();
  r.err_w = std::sqrt(ew);
  r.err_u = std::sqrt(eu);
  r.err_p = std::sqrt(ep);
  r.residual = level.solution.residual;
  r.pressure_deviation = deviation;
  r.div_max = (sys.D21 * level.solution.u).cwiseAbs().maxCoeff();

  const auto du = exterior_derivative(u_h);
  std::mt19937_64 rng(20240101);
  const auto& d0 = level.tensor->direction(0);
  const auto& d1 = level.tensor->direction(1);
  std::uniform_real_distribution<double> U(d0.front(), d0.back()), V(d1.front(), d1.back());
  for (int n = 0; n < 500; ++n) {
    const Point u{U(rng), V(rng), 0.0};
    r.div_pointwise = std::max(r.div_pointwise, std::abs(eval(du, u)[0] / checked_det(g.jacobian(u))));
  }

  if (c.geometry == "annulus") {
    constexpr int kSamples = 400;
    for (int n = 0; n < kSamples; ++n) {
      const double s = d0.front() + (d0.back() - d0.front()) * n / kSamples;
      const auto inner = pushforward_components(1, g, {s, 0.0, 0.0}, eval(u_h, {s, 0.0, 0.0}));
      const auto outer = pushforward_components(1, g, {s, 1.0, 0.0}, eval(u_h, {s, 1.0, 0.0}));
      r.speed_inner = std::max(r.speed_inner, std::abs(std::hypot(inner[0], inner[1]) - 1.0));
      r.speed_outer = std::max(r.speed_outer, std::hypot(outer[0], outer[1]));
    }
  }
  return r;
}

namespace {

double rate(double e0, double e1, double h0, double h1) { return std::log(e1 / e0) / std::log(h1 / h0); }

std::vector<ConvergenceRecord> run_ladder(const CaseConfig& c) {
  validate(c);
  std::vector<ConvergenceRecord> out;
  for (int l = 0; l < c.levels; ++l) {
    const int spans = c.base_spans << l;
    ConvergenceRecord r;
    try {
      r = measure_level(c, solve_level(c, spans), 2);
    } catch (const NumericalError& e) {
      throw NumericalError("level " + std::to_string(l + 1) + " (" + std::to_string(spans) + " spans): " + e.what());
    }
    r.level = l + 1;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.rate_w = r.rate_u = r.rate_p = nan;
    if (!out.empty()) {
      const auto& prev = out.back();
      r.rate_w = rate(prev.err_w, r.err_w, prev.h_max, r.h_max);
      r.rate_u = rate(prev.err_u, r.err_u, prev.h_max, r.h_max);
      r.rate_p = rate(prev.err_p, r.err_p, prev.h_max, r.h_max);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace

std::vector<ConvergenceRecord> run_manufactured(const CaseConfig& c) {
  if (c.name != "manufactured") throw ArgumentError("run_manufactured: case is '" + c.name + "'");
  return run_ladder(c);
}

std::vector<ConvergenceRecord> run_taylor_couette(const CaseConfig& c) {
  if (c.name != "taylor-couette") throw ArgumentError("run_taylor_couette: case is '" + c.name + "'");
  return run_ladder(c);
}

double fit_rate(const std::vector<double>& h, const std::vector<double>& err, std::size_t last) {
  if (h.size() != err.size() || h.size() < 2) throw ArgumentError("fit_rate: need at least two matching samples");
  const std::size_t n = std::min(last, h.size()), first = h.size() - n;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = first; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Eigen::VectorXd stream_function(const LevelSolution& level, double* residual) {
  const Eigen::SparseMatrix<double, Eigen::RowMajor> D = level.system.D10;
  const Eigen::SparseMatrix<double> Dc = level.system.D10;
  const Eigen::VectorXd& u = level.solution.u;
  const auto n0 = static_cast<std::size_t>(D.cols());
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(n0);
  std::vector<bool> known(n0, false);
  std::deque<Eigen::Index> queue{0};
  known[0] = true;
  while (!queue.empty()) {
    const auto node = queue.front();
    queue.pop_front();
    for (Eigen::SparseMatrix<double>::InnerIterator e(Dc, node); e; ++e) {
      Eigen::Index other = -1;
      double c_known = 0.0, c_other = 0.0;
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(D, e.row()); it; ++it) {
        if (it.col() == node) c_known = it.value();
        else { other = it.col(); c_other = it.value(); }
      }
      if (other < 0 || known[other]) continue;
      psi[other] = (u[e.row()] - c_known * psi[node]) / c_other;
      known[other] = true;
      queue.push_back(other);
    }
  }
  if (residual) *residual = (level.system.D10 * psi - u).cwiseAbs().maxCoeff();
  return psi;
}

FieldGrid sample_fields(const LevelSolution& level, std::size_t n) {
  const Geometry& g = *level.system.geometry;
  const auto& d0 = level.tensor->direction(0);
  const auto& d1 = level.tensor->direction(1);
  const auto w_h = level.omega();
  const auto u_h = level.velocity();
  const auto p_h = level.pressure();
  FieldGrid f;
  f.nx = f.ny = n;
  f.names = {"omega", "vel_x", "vel_y", "pressure"};
  f.values.assign(f.names.size(), {});
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const Point u{d0.front() + (d0.back() - d0.front()) * i / (n - 1), d1.front() + (d1.back() - d1.front()) * j / (n - 1),
                    0.0};
      const auto x = g.map_point(u);
      f.x.push_back(x[0]);
      f.y.push_back(x[1]);
      const auto a = pushforward_components(1, g, u, eval(u_h, u));
      f.values[0].push_back(eval(w_h, u)[0]);
      f.values[1].push_back(a[1]);
      f.values[2].push_back(0.0 - a[0]);
      f.values[3].push_back(pushforward_components(2, g, u, eval(p_h, u))[0]);
    }
  }
  return f;
}

ProfileDeviation profile_deviation(const std::vector<double>& s, const std::vector<double>& a,
                                   const std::vector<double>& b) {
  if (s.size() != a.size() || s.size() != b.size() || s.size() < 2)
    throw ArgumentError("profile_deviation: mismatched profiles");
  double dmax = 0.0, bmax = 0.0, ia = 0.0, ib = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    dmax = std::max(dmax, std::abs(a[i] - b[i]));
    bmax = std::max(bmax, std::abs(b[i]));
    if (i > 0) {
      const double h = 0.5 * (s[i] - s[i - 1]);
      ia += h * (std::abs(a[i]) + std::abs(a[i - 1]));
      ib += h * (std::abs(b[i]) + std::abs(b[i - 1]));
    }
  }
  return {dmax / bmax, std::abs(ia - ib) / ib};
}

CavityRun run_cavity(const CaseConfig& c, int spans) {
  if (c.name != "cavity") throw ArgumentError("run_cavity: case is '" + c.name + "'");
  const auto level = solve_level(c, spans);
  const Geometry& g = *level.system.geometry;
  const auto u_h = level.velocity();
  CavityRun r;
  r.spans = spans;
  constexpr int kProfile = 101;
  for (int i = 0; i < kProfile; ++i) {
    const double s = static_cast<double>(i) / (kProfile - 1);
    r.coord.push_back(s);
    const auto ah = pushforward_components(1, g, {0.5, s, 0.0}, eval(u_h, {0.5, s, 0.0}));
    const auto av = pushforward_components(1, g, {s, 0.5, 0.0}, eval(u_h, {s, 0.5, 0.0}));
    r.horizontal.push_back(ah[1]);
    r.vertical.push_back(0.0 - av[0]);
  }
  const Eigen::VectorXd psi = stream_function(level, &r.stream_residual);
  r.fields = sample_fields(level, kProfile);
  const DiscreteForm psi_h(level.system.space0, psi);
  std::vector<double> values;
  const auto& d0 = level.tensor->direction(0);
  const auto& d1 = level.tensor->direction(1);
  for (std::size_t j = 0; j < r.fields.ny; ++j)
    for (std::size_t i = 0; i < r.fields.nx; ++i)
      values.push_back(eval(psi_h, {d0.front() + (d0.back() - d0.front()) * i / (r.fields.nx - 1),
                                    d1.front() + (d1.back() - d1.front()) * j / (r.fields.ny - 1), 0.0})[0]);
  r.fields.names.push_back("psi");
  r.fields.values.push_back(std::move(values));
  return r;
}

CaseResult run_case(const CaseConfig& c) {
  validate(c);
  CaseResult result;
  result.config = c;
  if (c.name == "cavity") {
    for (int s : c.spans) result.cavity.push_back(run_cavity(c, s));
    return result;
  }
  result.records = run_ladder(c);
  result.fields = sample_fields(solve_level(c, c.base_spans << (c.levels - 1)), 51);
  return result;
}

std::string version_string() { return std::string(MIMETIC_VERSION) + " (" + MIMETIC_GIT_HASH + ")"; }

namespace {

void write_grid(const FieldGrid& f, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "# nx=" << f.nx << " ny=" << f.ny << "\n# x y";
  for (const auto& n : f.names) out << ' ' << n;
  out << '\n';
  for (std::size_t j = 0; j < f.ny; ++j) {
    for (std::size_t i = 0; i < f.nx; ++i) {
      const std::size_t n = i + f.nx * j;
      out << fmt(f.x[n]) << ' ' << fmt(f.y[n]);
      for (const auto& v : f.values) out << ' ' << fmt(v[n]);
      out << '\n';
    }
    out << '\n';
  }
}

}  // namespace

void emit_outputs(const CaseResult& result) {
  namespace fs = std::filesystem;
  const auto& c = result.config;
  const fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  {
    auto out = open_output(dir / "run.txt");
    out << "case=" << c.name << "\ndegree=" << c.degree << "\nvorticity_degree=" << c.degree + 1
        << "\nlevels=" << c.levels << "\ngeometry=" << c.geometry << "\nnu=" << fmt(c.nu) << "\nquad=" << c.quad
        << "\nbase_spans=" << c.base_spans << "\nspans=";
    for (std::size_t i = 0; i < c.spans.size(); ++i) out << (i ? "," : "") << c.spans[i];
    out << "\nout=" << c.out_dir << "\nversion=" << MIMETIC_VERSION << "\ngit=" << MIMETIC_GIT_HASH << '\n';
    if (c.geometry == "curved-square")
      out << "curved_map=bicubic 4x4-span B-spline interpolating x = u + 0.1 sin(2 pi u) sin(2 pi v), "
             "y = v + 0.1 sin(2 pi u) sin(2 pi v) at the Greville grid\n";
  }

  if (!result.records.empty()) {
    auto out = open_output(dir / "convergence.csv");
    out << "level,h_max,dof,err_w,err_u,err_p,div_max,rate_w,rate_u,rate_p,div_pointwise,pressure_deviation,"
           "speed_inner,speed_outer\n";
    for (const auto& r : result.records) {
      out << r.level << ',' << fmt(r.h_max) << ',' << r.dof << ',' << fmt(r.err_w) << ',' << fmt(r.err_u) << ','
          << fmt(r.err_p) << ',' << fmt(r.div_max) << ',' << fmt(r.rate_w) << ',' << fmt(r.rate_u) << ','
          << fmt(r.rate_p) << ',' << fmt(r.div_pointwise) << ',' << fmt(r.pressure_deviation) << ','
          << fmt(r.speed_inner) << ',' << fmt(r.speed_outer) << '\n';
    }
    write_grid(result.fields, dir / "fields.dat");
  }

  for (const auto& run : result.cavity) {
    const std::string tag = std::to_string(run.spans);
    auto out = open_output(dir / ("profiles_" + tag + ".csv"));
    out << "s,horizontal,vertical\n";
    for (std::size_t i = 0; i < run.coord.size(); ++i)
      out << fmt(run.coord[i]) << ',' << fmt(run.horizontal[i]) << ',' << fmt(run.vertical[i]) << '\n';
    write_grid(run.fields, dir / ("fields_" + tag + ".dat"));
  }
  if (result.cavity.size() > 1) {
    const auto& ref = result.cavity.back();
    auto out = open_output(dir / "cavity_comparison.csv");
    out << "spans,reference_spans,max_dev_horizontal,int_dev_horizontal,max_dev_vertical,int_dev_vertical,"
           "stream_residual\n";
    for (std::size_t i = 0; i + 1 < result.cavity.size(); ++i) {
      const auto& run = result.cavity[i];
      const auto h = profile_deviation(run.coord, run.horizontal, ref.horizontal);
      const auto v = profile_deviation(run.coord, run.vertical, ref.vertical);
      out << run.spans << ',' << ref.spans << ',' << fmt(h.max_relative) << ',' << fmt(h.integral_relative) << ','
          << fmt(v.max_relative) << ',' << fmt(v.integral_relative) << ',' << fmt(run.stream_residual) << '\n';
    }
  }
}

}  // namespace mimetic
