#include "sqg/checks.hpp"

#include <algorithm>
#include <cmath>

#include "sqg/errors.hpp"
#include "sqg/geodesic.hpp"
#include "sqg/operators.hpp"
#include "sqg/random_fields.hpp"

namespace sqg {

double coarse_factor(int n) { return std::max(1.0, std::pow(128.0 / n, 2)); }

std::vector<CheckResult> run_checks(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  auto add = [&](const std::string& name, double value, double tol, const std::string& note = "") {
    out.push_back({name, value, tol, std::isfinite(value) && value <= tol, note});
  };

  const GridPtr grid = make_grid(cfg.grid.n, cfg.grid.box_length);
  const int kmax = std::min(cfg.initial.kmax, cfg.grid.n / 3);
  const ScalarField f = random_band_limited(grid, cfg.rng_seed, {kmax, cfg.initial.slope, 1.0});
  const ScalarField h = random_band_limited(grid, cfg.rng_seed + 1, {kmax, cfg.initial.slope, 1.0});

  {
    const ScalarField back = -riesz(riesz(f, 1), 1) - riesz(riesz(f, 2), 2);
    add("riesz_identity", l2_norm(back - f) / l2_norm(f), 1e-12);
  }
  {
    double worst = 0.0;
    for (int k = 1; k <= 2; ++k) {
      const double a = inner_product(riesz(f, k), h);
      const double b = inner_product(f, riesz(h, k));
      worst = std::max(worst, std::abs(a + b) / (l2_norm(f) * l2_norm(h)));
    }
    add("riesz_antisymmetry", worst, 1e-12);
  }
  const VectorField2 u0 = velocity_from_theta(f);
  add("velocity_divergence_free", l2_norm(divergence(u0)) / l2_norm(u0), 1e-12);
  add("theta_u_roundtrip", l2_norm(theta_from_u(u0) - f) / l2_norm(f), 1e-12);

  TimeStepConfig ts = cfg.time_step();
  ts.snapshot_stride = 0;
  ts.diag_stride = 1;
  try {
    const EulerianTrajectory eu = solve_u(u0, ts);
    double worst = 0.0;
    for (const auto& d : eu.diagnostics) {
      worst = std::max(worst, d.div_diag);
    }
    add("lemma3_divergence", worst, 1e-8);

    TimeStepConfig tt = ts;
    tt.dt = eu.dt;
    const EulerianTrajectory et = solve_theta(f, tt);
    add("prop4_equivalence", l2_norm(theta_from_u(eu.final_u()) - et.final_theta()) / l2_norm(f), 1e-6,
        ts.dealias ? "" : "dealiasing off");

    const double factor = coarse_factor(cfg.grid.n);
    const GeodesicTrajectory lag = solve_geodesic(u0, tt);
    add("lagrangian_equivalence", l2_norm(eulerian_velocity(lag.final_state()) - eu.final_u()) / l2_norm(u0),
        1e-3 * factor);
    const ScalarField via = solve_via_flow(f, ts.t_end, tt);
    add("transport_law", l2_norm(via - et.final_theta()) / l2_norm(f), 1e-3 * factor);
  } catch (const Error& e) {
    add("solver", INFINITY, 0.0, e.what());
  }
  return out;
}

}  // namespace sqg
