#pragma once

#include <vector>

#include "sqg/diffeo.hpp"
#include "sqg/eulerian.hpp"

namespace sqg {

struct FlowState {
  DiffeoMap phi;
  VectorField2 v;
};

FlowState axpy(const FlowState& a, double s, const FlowState& b);

struct FlowDerivative {
  VectorField2 dphi;  // = v
  VectorField2 dv;    // = B(v o phi^{-1}) o phi
};

struct GeodesicOptions {
  CompositionMethod method = CompositionMethod::bicubic;
};

// Right side of the geodesic system. `inverse_guess` warm-starts the inversion
// of phi and receives the computed inverse.
FlowDerivative geodesic_rhs(const FlowState& state, bool dealias = true, DiffeoMap* inverse_guess = nullptr,
                            const GeodesicOptions& opt = {});

struct GeodesicTrajectory {
  std::vector<double> times;
  std::vector<FlowState> states;  // snapshots, first and last always present
  double dt = 0.0;
  int steps = 0;
  const FlowState& final_state() const { return states.back(); }
};

// phi(0) = id, v(0) = u0. Aborts (SolverAbort) on CFL violation, non-finite
// values or loss of the Jacobian floor.
GeodesicTrajectory solve_geodesic(const VectorField2& u0, const TimeStepConfig& cfg, const GeodesicOptions& opt = {});

// v o phi^{-1}
VectorField2 eulerian_velocity(const FlowState& state, const GeodesicOptions& opt = {});

// phi(1; t u0), integrated on [0, 1] with dt / t so the step count matches an
// integration of u0 on [0, t].
DiffeoMap exp_map(const VectorField2& u0, double t, const TimeStepConfig& cfg, const GeodesicOptions& opt = {});
// phi(t; u0) by integrating u0 directly on [0, t].
DiffeoMap flow_map(const VectorField2& u0, double t, const TimeStepConfig& cfg, const GeodesicOptions& opt = {});

struct FlowSolution {
  ScalarField theta;  // theta0 o phi^{-1}
  DiffeoMap phi;
  DiffeoMap phi_inverse;
};

// theta(T) = theta0 o phi^{-1}, phi = exp(T u0), u0 = velocity_from_theta(theta0).
// The mean of theta0 rides along unchanged (it does not enter u0).
FlowSolution solve_via_flow_detailed(const ScalarField& theta0, double T, const TimeStepConfig& cfg,
                                     const GeodesicOptions& opt = {});
ScalarField solve_via_flow(const ScalarField& theta0, double T, const TimeStepConfig& cfg,
                           const GeodesicOptions& opt = {});

}  // namespace sqg
