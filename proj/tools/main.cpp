#include <CLI11.hpp>

#include <iostream>

#include "mimetic/checks.hpp"
#include "mimetic/errors.hpp"
#include "mimetic/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kBadArguments = 2;

void print_summary(const mimetic::CaseResult& result) {
  for (const auto& r : result.records) {
    std::cout << "level " << r.level << "  h=" << r.h_max << "  dof=" << r.dof << "  err_w=" << r.err_w
              << "  err_u=" << r.err_u << "  err_p=" << r.err_p << "  div=" << r.div_max << '\n';
  }
  for (const auto& run : result.cavity) {
    std::cout << "cavity " << run.spans << "x" << run.spans << "  stream residual=" << run.stream_residual << '\n';
  }
  std::cout << "wrote " << result.config.out_dir << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mimetic spline discretisation of Stokes flow"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mimetic::version_string());

  // Run options live on the top-level app so a plain key=value config file can set
  // them; `run` falls through to them.
  app.set_config("--config", "", "key=value configuration file; flags override it");
  auto* run = app.add_subcommand("run", "Run a test case and write its outputs");
  run->fallthrough();
  std::string name;
  int degree = 0, levels = 0, quad = 0, base_spans = 0;
  std::string geometry, out;
  double nu = 1.0;
  std::vector<int> spans;
  run->add_option("case", name, "manufactured | taylor-couette | cavity")->required();
  auto* o_degree = app.add_option("--degree", degree, "velocity/pressure degree (vorticity is one higher)");
  auto* o_levels = app.add_option("--levels", levels, "refinement levels");
  auto* o_geometry = app.add_option("--geometry", geometry, "unit-square | curved-square | annulus | cavity");
  auto* o_out = app.add_option("--out", out, "output directory");
  auto* o_nu = app.add_option("--nu", nu, "viscosity");
  auto* o_quad = app.add_option("--quad", quad, "Gauss points per axis (0 = automatic)");
  auto* o_base = app.add_option("--base-spans", base_spans, "spans per direction on the first level");
  auto* o_spans = app.add_option("--spans", spans, "cavity resolutions; the last is the reference")->delimiter(',');

  app.add_subcommand("list-cases", "List the available cases");
  auto* verify = app.add_subcommand("verify", "Run the property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadArguments;
  }

  try {
    if (app.got_subcommand("list-cases")) {
      for (const auto& n : mimetic::case_names()) {
        const auto c = mimetic::default_config(n);
        std::cout << n << "  (geometry " << c.geometry << ", degree " << c.degree << ")\n";
      }
      return kOk;
    }
    if (verify->parsed()) {
      const auto results = mimetic::run_property_suite(&std::cout);
      bool ok = true;
      for (const auto& r : results) ok = ok && r.passed;
      std::cout << (ok ? "all checks passed" : "some checks failed") << '\n';
      return ok ? kOk : kFailure;
    }

    auto config = mimetic::default_config(name);
    if (o_degree->count()) config.degree = degree;
    if (o_levels->count()) config.levels = levels;
    if (o_geometry->count()) config.geometry = geometry;
    if (o_out->count()) config.out_dir = out;
    if (o_nu->count()) config.nu = nu;
    if (o_quad->count()) config.quad = quad;
    if (o_base->count()) config.base_spans = base_spans;
    if (o_spans->count()) config.spans = spans;
    mimetic::validate(config);
    const auto result = mimetic::run_case(config);
    mimetic::emit_outputs(result);
    print_summary(result);
    return kOk;
  } catch (const mimetic::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const mimetic::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
