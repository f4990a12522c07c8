#include "sqg/eulerian.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "sqg/errors.hpp"
#include "sqg/rk4.hpp"

namespace sqg {
namespace {

ScalarField project_mean(const ScalarField& f) {
  const double m = mean(f);
  RealBuffer out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = f.data()[i] - m;
  }
  return ScalarField(f.grid_ptr(), std::move(out));
}

VectorField2 project_mean(const VectorField2& u) { return {project_mean(u.x()), project_mean(u.y())}; }

void require_finite(const ScalarField& f, double t) {
  if (!all_finite(f)) {
    throw SolverAbort(SolverAbort::Reason::non_finite, t, "non-finite values at t = " + std::to_string(t));
  }
}

void check_cfl(double max_speed, double dt, double dx, double safety, double t) {
  if (max_speed * dt > safety * dx) {
    throw SolverAbort(SolverAbort::Reason::cfl, t,
                      "CFL violated at t = " + std::to_string(t) + ": dt * max|u| = " +
                          std::to_string(max_speed * dt) + " > " + std::to_string(safety * dx));
  }
}

void require_solver_input(const ScalarField& theta0) {
  const double scale = std::max(grid_max_abs(theta0), 1e-300);
  if (std::abs(mean(theta0)) > 1e-12 * scale) {
    throw InvalidArgument("initial theta must be mean-zero (mean " + std::to_string(mean(theta0)) + ")");
  }
  const double leak = out_of_band_fraction(theta0);
  if (leak > 1e-10) {
    throw InvalidArgument("initial data is not band-limited: " + std::to_string(leak) +
                          " of its L2 norm lies outside the dealiased band");
  }
}

bool due(int step, int steps, int stride) { return step == steps || (stride > 0 && step % stride == 0); }

}  // namespace

void TimeStepConfig::validate() const {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw InvalidArgument("t_end must be positive");
  }
  if (!std::isfinite(dt)) {
    throw InvalidArgument("dt must be finite");
  }
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
    throw InvalidArgument("cfl_safety must lie in (0, 1]");
  }
  if (velocity_sign != 1.0 && velocity_sign != -1.0) {
    throw InvalidArgument("velocity_sign must be +1 or -1");
  }
  if (snapshot_stride < 0 || diag_stride < 1) {
    throw InvalidArgument("snapshot_stride must be >= 0 and diag_stride >= 1");
  }
  SobolevIndex{diag_s};
}

StepPlan plan_steps(const TimeStepConfig& cfg, double max_speed, double dx) {
  cfg.validate();
  double dt = cfg.dt;
  if (dt <= 0.0) {
    dt = max_speed > 0.0 ? kAutoDtHeadroom * cfg.cfl_safety * dx / max_speed : cfg.t_end;
  }
  const double raw = cfg.t_end / dt;
  int steps = static_cast<int>(std::ceil(raw - 1e-9 * raw));
  if (steps < 1) {
    steps = 1;
  }
  return {steps, cfg.t_end / steps};
}

ScalarField rhs_theta(const ScalarField& theta, bool dealias, double velocity_sign) {
  VectorField2 u = velocity_from_theta(theta);
  if (velocity_sign != 1.0) {
    u = velocity_sign * u;
  }
  return -transport(u, theta, dealias);
}

VectorField2 rhs_u(const VectorField2& u, bool dealias) {
  OperatorWorkspace ws(u.grid_ptr(), dealias);
  VectorField2 b = ws.b_operator(u);
  ScalarField a1 = ws.transport(u, u.x());
  ScalarField a2 = ws.transport(u, u.y());
  return {b.x() - a1, b.y() - a2};
}

DiagnosticRecord diagnose(double t, const ScalarField& theta, const VectorField2& u, double s) {
  DiagnosticRecord r;
  r.t = t;
  r.l2 = l2_norm(theta);
  r.linf = linf_norm(theta);
  r.hs = sobolev_norm(theta, SobolevIndex(s));
  const double un = l2_norm(u);
  r.div_diag = un > 0.0 ? l2_norm(div_diagnostic(u)) / un : 0.0;
  return r;
}

ScalarField exponential_filter(const ScalarField& f) {
  const Grid& g = f.grid();
  SpectralField c = to_spectral(f);
  const double kc = g.n() / 2;
  for (int j = 0; j < g.n(); ++j) {
    const double a2 = std::abs(g.mode2(j)) / kc;
    for (int i = 0; i < g.half(); ++i) {
      const double a1 = g.mode1(i) / kc;
      c.coeffs()[g.spectral_index(j, i)] *= std::exp(-36.0 * (std::pow(a1, 36) + std::pow(a2, 36)));
    }
  }
  return from_spectral(c);
}

double out_of_band_fraction(const ScalarField& f) {
  const SpectralField c = to_spectral(f);
  const double total = sobolev_norm(c, SobolevIndex(0.0));
  if (total == 0.0) {
    return 0.0;
  }
  const double kept = sobolev_norm(c, SobolevIndex(0.0), true);
  return std::sqrt(std::max(0.0, total * total - kept * kept)) / total;
}

EulerianTrajectory solve_theta(const ScalarField& theta0, const TimeStepConfig& cfg) {
  require_solver_input(theta0);
  const Grid& g = theta0.grid();
  const StepPlan plan = plan_steps(cfg, grid_max_abs(velocity_from_theta(theta0)), g.dx());

  EulerianTrajectory traj;
  traj.dt = plan.dt;
  traj.steps = plan.steps;
  auto record = [&](double t, const ScalarField& th) {
    traj.diagnostics.push_back(diagnose(t, th, velocity_from_theta(th), cfg.diag_s));
    if (cfg.on_diagnostic) {
      cfg.on_diagnostic(traj.diagnostics.back());
    }
  };

  ScalarField theta = project_mean(theta0);
  traj.times.push_back(0.0);
  traj.theta.push_back(theta);
  record(0.0, theta);

  auto rhs = [&](const ScalarField& th) { return rhs_theta(th, cfg.dealias, cfg.velocity_sign); };
  auto proj = [](const ScalarField& th) { return project_mean(th); };
  for (int step = 1; step <= plan.steps; ++step) {
    const double t_prev = (step - 1) * plan.dt;
    check_cfl(grid_max_abs(velocity_from_theta(theta)), plan.dt, g.dx(), cfg.cfl_safety, t_prev);
    theta = rk4_step(theta, plan.dt, rhs, proj);
    if (cfg.filter) {
      theta = exponential_filter(theta);
    }
    const double t = step == plan.steps ? cfg.t_end : step * plan.dt;
    require_finite(theta, t);
    if (due(step, plan.steps, cfg.diag_stride)) {
      record(t, theta);
    }
    if (due(step, plan.steps, cfg.snapshot_stride)) {
      traj.times.push_back(t);
      traj.theta.push_back(theta);
    }
  }
  return traj;
}

EulerianTrajectory solve_u(const VectorField2& u0, const TimeStepConfig& cfg) {
  require_solver_input(u0.x());
  require_solver_input(u0.y());
  const Grid& g = u0.grid();
  const StepPlan plan = plan_steps(cfg, grid_max_abs(u0), g.dx());

  EulerianTrajectory traj;
  traj.dt = plan.dt;
  traj.steps = plan.steps;
  auto keep = [&](double t, const VectorField2& u) {
    traj.times.push_back(t);
    traj.u.push_back(u);
    traj.theta.push_back(theta_from_u(u));
  };
  auto record = [&](double t, const VectorField2& u) {
    traj.diagnostics.push_back(diagnose(t, theta_from_u(u), u, cfg.diag_s));
    if (cfg.on_diagnostic) {
      cfg.on_diagnostic(traj.diagnostics.back());
    }
  };

  VectorField2 u = project_mean(u0);
  keep(0.0, u);
  record(0.0, u);

  auto rhs = [&](const VectorField2& w) { return rhs_u(w, cfg.dealias); };
  auto proj = [](const VectorField2& w) { return project_mean(w); };
  for (int step = 1; step <= plan.steps; ++step) {
    const double t_prev = (step - 1) * plan.dt;
    check_cfl(grid_max_abs(u), plan.dt, g.dx(), cfg.cfl_safety, t_prev);
    u = rk4_step(u, plan.dt, rhs, proj);
    if (cfg.filter) {
      u = VectorField2(exponential_filter(u.x()), exponential_filter(u.y()));
    }
    const double t = step == plan.steps ? cfg.t_end : step * plan.dt;
    require_finite(u.x(), t);
    require_finite(u.y(), t);
    if (due(step, plan.steps, cfg.diag_stride)) {
      record(t, u);
    }
    if (due(step, plan.steps, cfg.snapshot_stride)) {
      keep(t, u);
    }
  }
  return traj;
}

std::string format_diagnostic_row(const DiagnosticRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g", r.t, r.l2, r.linf, r.hs, r.div_diag);
  return buf;
}

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticRecord>& rows) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  os << "t,l2,linf,hs,div_diag\n";
  for (const auto& r : rows) {
    os << format_diagnostic_row(r) << '\n';
  }
}

}  // namespace sqg
