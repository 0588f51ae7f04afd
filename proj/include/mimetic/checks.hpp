#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mimetic {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Property suite behind `verify`: exactness of the incidence matrices, edge-function
/// identities, commuting projection, pullback adjointness, mass matrix symmetry and
/// definiteness, operator symmetry, and the divergence and pressure properties of the
/// solved cases. Each result is printed to `log` as it completes when given.
std::vector<CheckResult> run_property_suite(std::ostream* log = nullptr);

}  // namespace mimetic
