#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mimetic/assembly.hpp"
#include "mimetic/geometry.hpp"
#include "mimetic/spaces.hpp"

namespace mimetic {

/// One run of a test case. `degree` is the velocity/pressure degree p; vorticity uses
/// the nodal degree p + 1 of the same sequence.
struct CaseConfig {
  std::string name = "manufactured";
  int degree = 2;
  int levels = 4;
  std::string geometry = "unit-square";
  double nu = 1.0;
  int quad = 0;  // Gauss points per axis; 0 = automatic
  int base_spans = 4;
  std::vector<int> spans{9, 60};  // cavity resolutions; the last one is the reference
  std::string out_dir = "out";
};

struct ConvergenceRecord {
  int level = 0;
  int spans = 0;
  double h_max = 0.0;
  std::size_t dof = 0;
  double err_w = 0.0, err_u = 0.0, err_p = 0.0;
  double div_max = 0.0;        // max |D21 ū|
  double div_pointwise = 0.0;  // max |div u_h| at sampled points
  double rate_w = 0.0, rate_u = 0.0, rate_p = 0.0;  // against the previous level; NaN on the first
  double residual = 0.0;
  double pressure_deviation = 0.0;  // max |p_h - mean p_h| at quadrature points
  double speed_inner = 0.0;         // max ||u_h| - 1| on r = 1 (Taylor–Couette)
  double speed_outer = 0.0;         // max |u_h| on r = 2 (Taylor–Couette)
};

/// Discrete solution of one level, with its spaces and geometry.
struct LevelSolution {
  SaddleSystem system;
  Solution solution;
  std::shared_ptr<const TensorSpace> tensor;
  DiscreteForm omega() const { return DiscreteForm(system.space0, solution.omega); }
  DiscreteForm velocity() const { return DiscreteForm(system.space1, solution.u); }
  DiscreteForm pressure() const { return DiscreteForm(system.space2, solution.p); }
};

/// Samples on a regular grid of parametric points, with their physical coordinates.
struct FieldGrid {
  std::size_t nx = 0, ny = 0;
  std::vector<double> x, y;
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
};

struct CavityRun {
  int spans = 0;
  std::vector<double> coord;       // 101 points in [0, 1]
  std::vector<double> horizontal;  // horizontal velocity on x = 0.5 at y = coord
  std::vector<double> vertical;    // vertical velocity on y = 0.5 at x = coord
  double stream_residual = 0.0;
  FieldGrid fields;
};

/// Deviation of a profile from a reference profile: max |a - b| / max |b|, and the
/// relative difference of ∫|a| and ∫|b| (trapezoidal).
struct ProfileDeviation {
  double max_relative = 0.0;
  double integral_relative = 0.0;
};
ProfileDeviation profile_deviation(const std::vector<double>& coord, const std::vector<double>& a,
                                   const std::vector<double>& b);

struct CaseResult {
  CaseConfig config;
  std::vector<ConvergenceRecord> records;
  std::vector<CavityRun> cavity;
  FieldGrid fields;
};

namespace manufactured {
double omega(const Point& x);
/// Flux-form velocity components (dx and dy coefficients).
double ux(const Point& x);
double uy(const Point& x);
double pressure(const Point& x);
double fx(const Point& x);
double fy(const Point& x);
}  // namespace manufactured

namespace taylor_couette {
/// Azimuthal speed profile -r/3 + 4/(3r).
double speed(double r);
Eigen::Vector2d velocity_form(const Point& x);
inline constexpr double kOmega = -2.0 / 3.0;
}  // namespace taylor_couette

std::vector<std::string> case_names();
/// Defaults for a named case (geometry, spans); throws ArgumentError for unknown names.
CaseConfig default_config(const std::string& name);
void validate(const CaseConfig& config);

std::shared_ptr<const Geometry> make_geometry(const std::string& name);
/// Uniform open knot vector of degree p on [0, 1] with `spans` spans whose continuity
/// at the geometry breakpoints is capped at C^{geometry_degree - 1}, so the field space
/// refines the geometry's spline space.
KnotVector conforming_knots(int p, int spans, const std::vector<double>& geometry_breaks, int geometry_degree);

/// Field space of a level: nodal degree p + 1, `spans` spans per direction (per patch
/// angularly on the annulus: spans / 4, at least 1), conforming to the geometry knots.
std::shared_ptr<const TensorSpace> make_field_space(const CaseConfig& config, int spans);

LevelSolution solve_level(const CaseConfig& config, int spans);

/// Errors, h_max and divergence diagnostics of a solved level for the manufactured or
/// Taylor–Couette case.
ConvergenceRecord measure_level(const CaseConfig& config, const LevelSolution& level, int extra_points = 2);

std::vector<ConvergenceRecord> run_manufactured(const CaseConfig& config);
std::vector<ConvergenceRecord> run_taylor_couette(const CaseConfig& config);
CavityRun run_cavity(const CaseConfig& config, int spans);
CaseResult run_case(const CaseConfig& config);

/// Stream function ψ in Λ⁰ with D10 ψ = ū (ψ = 0 at the first node), by path
/// integration; returns the residual max |D10 ψ - ū|.
Eigen::VectorXd stream_function(const LevelSolution& level, double* residual = nullptr);

/// Least-squares slope of log(err) against log(h) over the last `last` entries.
double fit_rate(const std::vector<double>& h, const std::vector<double>& err, std::size_t last = 3);

/// Physical max element diagonal / √2.
double h_max(const TensorSpace& space, const Geometry& geometry);

FieldGrid sample_fields(const LevelSolution& level, std::size_t n);

void emit_outputs(const CaseResult& result);

std::string version_string();

}  // namespace mimetic
