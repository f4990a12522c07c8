#pragma once

#include <string>
#include <vector>

#include "sqg/config.hpp"

namespace sqg {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

// Grid-dependent tolerances (interpolation error of the Lagrangian path) are
// multiplied by max(1, (128 / n)^2); the spectral identities are not scaled.
double coarse_factor(int n);

// Invariant suite at the configured grid, solver and seed: spectral
// identities, divergence conservation, theta/u equivalence and
// Eulerian/Lagrangian equivalence.
std::vector<CheckResult> run_checks(const RunConfig& cfg);

}  // namespace sqg
