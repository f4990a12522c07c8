#include "sqg/geodesic.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "sqg/errors.hpp"
#include "sqg/operators.hpp"
#include "sqg/rk4.hpp"

namespace sqg {

FlowState axpy(const FlowState& a, double s, const FlowState& b) {
  return {axpy(a.phi, s, b.phi.displacement()), axpy(a.v, s, b.v)};
}

FlowDerivative geodesic_rhs(const FlowState& state, bool dealias, DiffeoMap* inverse_guess,
                            const GeodesicOptions& opt) {
  require_same_grid(state.phi.grid(), state.v.grid(), "geodesic_rhs");
  const DiffeoMap inv = invert_diffeo(state.phi, inverse_guess, opt.method);
  const VectorField2 w = compose_vector(state.v, inv, opt.method);
  const VectorField2 b = b_operator(w, dealias);
  FlowDerivative out{state.v, compose_vector(b, state.phi, opt.method)};
  if (inverse_guess != nullptr) {
    *inverse_guess = inv;
  }
  return out;
}

namespace {

void require_finite_state(const FlowState& s, double t) {
  if (!all_finite(s.v.x()) || !all_finite(s.v.y()) || !all_finite(s.phi.displacement().x()) ||
      !all_finite(s.phi.displacement().y())) {
    throw SolverAbort(SolverAbort::Reason::non_finite, t, "non-finite flow state at t = " + std::to_string(t));
  }
}

}  // namespace

GeodesicTrajectory solve_geodesic(const VectorField2& u0, const TimeStepConfig& cfg, const GeodesicOptions& opt) {
  const Grid& g = u0.grid();
  const StepPlan plan = plan_steps(cfg, grid_max_abs(u0), g.dx());

  GeodesicTrajectory traj;
  traj.dt = plan.dt;
  traj.steps = plan.steps;

  FlowState state{DiffeoMap::identity(u0.grid_ptr()), u0};
  traj.times.push_back(0.0);
  traj.states.push_back(state);
  DiffeoMap inverse = DiffeoMap::identity(u0.grid_ptr());

  // the stage rhs shares one warm start; each stage map is close to the last
  auto rhs = [&](const FlowState& s) {
    FlowDerivative d = geodesic_rhs(s, cfg.dealias, &inverse, opt);
    return FlowState{DiffeoMap(std::move(d.dphi)), std::move(d.dv)};
  };
  auto proj = [](const FlowState& s) { return s; };

  for (int step = 1; step <= plan.steps; ++step) {
    const double t_prev = (step - 1) * plan.dt;
    const double speed = grid_max_abs(state.v);
    if (speed * plan.dt > cfg.cfl_safety * g.dx()) {
      throw SolverAbort(SolverAbort::Reason::cfl, t_prev,
                        "CFL violated at t = " + std::to_string(t_prev) + " (max|v| = " + std::to_string(speed) + ")");
    }
    try {
      state = rk4_step(state, plan.dt, rhs, proj);
      require_finite_state(state, step * plan.dt);
      require_diffeo(state.phi);
    } catch (const DiffeoError& e) {
      throw SolverAbort(SolverAbort::Reason::diffeo, t_prev, e.what());
    }
    const double t = step == plan.steps ? cfg.t_end : step * plan.dt;
    if (step == plan.steps || (cfg.snapshot_stride > 0 && step % cfg.snapshot_stride == 0)) {
      traj.times.push_back(t);
      traj.states.push_back(state);
    }
  }
  return traj;
}

VectorField2 eulerian_velocity(const FlowState& state, const GeodesicOptions& opt) {
  const DiffeoMap inv = invert_diffeo(state.phi, nullptr, opt.method);
  return compose_vector(state.v, inv, opt.method);
}

DiffeoMap exp_map(const VectorField2& u0, double t, const TimeStepConfig& cfg, const GeodesicOptions& opt) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("exp_map: t must be finite and >= 0");
  }
  if (t == 0.0) {
    return DiffeoMap::identity(u0.grid_ptr());
  }
  TimeStepConfig unscaled = cfg;
  unscaled.t_end = t;
  const StepPlan plan = plan_steps(unscaled, grid_max_abs(u0), u0.grid().dx());
  TimeStepConfig scaled = cfg;
  scaled.t_end = 1.0;
  scaled.dt = 1.0 / plan.steps;
  scaled.snapshot_stride = 0;
  return solve_geodesic(t * u0, scaled, opt).final_state().phi;
}

DiffeoMap flow_map(const VectorField2& u0, double t, const TimeStepConfig& cfg, const GeodesicOptions& opt) {
  TimeStepConfig c = cfg;
  c.t_end = t;
  c.snapshot_stride = 0;
  return solve_geodesic(u0, c, opt).final_state().phi;
}

FlowSolution solve_via_flow_detailed(const ScalarField& theta0, double T, const TimeStepConfig& cfg,
                                     const GeodesicOptions& opt) {
  const VectorField2 u0 = velocity_from_theta(theta0);
  DiffeoMap phi = exp_map(u0, T, cfg, opt);
  DiffeoMap inv = invert_diffeo(phi, nullptr, opt.method);
  ScalarField theta = compose_scalar(theta0, inv, opt.method);
  return {std::move(theta), std::move(phi), std::move(inv)};
}

ScalarField solve_via_flow(const ScalarField& theta0, double T, const TimeStepConfig& cfg,
                           const GeodesicOptions& opt) {
  return solve_via_flow_detailed(theta0, T, cfg, opt).theta;
}

}  // namespace sqg
