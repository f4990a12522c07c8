#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "sqg/field.hpp"
#include "sqg/operators.hpp"

namespace sqg {

struct DiagnosticRecord {
  double t = 0.0;
  double l2 = 0.0;        // ||theta||_{L2}
  double linf = 0.0;      // sup |theta| of the interpolant
  double hs = 0.0;        // ||theta||_s, s = TimeStepConfig::diag_s
  double div_diag = 0.0;  // ||Phi||_{L2} / ||u||_{L2}, 0 when u = 0
};

struct TimeStepConfig {
  double dt = 0.0;           // <= 0 picks dt from the initial CFL bound
  double t_end = 1.0;
  double cfl_safety = 0.5;   // dt * max|u| <= cfl_safety * dx, checked every step
  bool dealias = true;
  bool filter = false;       // 36th-order exponential filter after each step
  double velocity_sign = 1.0;  // -1 runs the velocity law backwards (theta form only)
  int snapshot_stride = 0;   // keep every k-th state; 0 keeps first and last only
  int diag_stride = 1;       // diagnostics every k steps (and at the end)
  double diag_s = 2.5;

  // Called with every diagnostic record as it is produced.
  std::function<void(const DiagnosticRecord&)> on_diagnostic;

  void validate() const;
};

// Fraction of the CFL bound used when dt is chosen automatically, leaving room
// for max|u| to grow before the per-step check fires.
inline constexpr double kAutoDtHeadroom = 0.8;

// Number of steps and the step that lands exactly on t_end.
struct StepPlan {
  int steps = 0;
  double dt = 0.0;
};
StepPlan plan_steps(const TimeStepConfig& cfg, double max_speed, double dx);

struct EulerianTrajectory {
  std::vector<double> times;             // of the snapshots, strictly increasing from 0
  std::vector<ScalarField> theta;        // snapshots
  std::vector<VectorField2> u;           // u formulation only, same times
  std::vector<DiagnosticRecord> diagnostics;
  double dt = 0.0;
  int steps = 0;

  const ScalarField& final_theta() const { return theta.back(); }
  const VectorField2& final_u() const { return u.back(); }
};

// -(u . grad) theta with u = sign * (-R_2 theta, R_1 theta).
ScalarField rhs_theta(const ScalarField& theta, bool dealias = true, double velocity_sign = 1.0);
// B(u, u) - (u . grad) u
VectorField2 rhs_u(const VectorField2& u, bool dealias = true);

// Throws InvalidArgument unless theta0 is mean-zero and inside the dealiased
// band; SolverAbort on CFL violation or non-finite values.
EulerianTrajectory solve_theta(const ScalarField& theta0, const TimeStepConfig& cfg);
EulerianTrajectory solve_u(const VectorField2& u0, const TimeStepConfig& cfg);

DiagnosticRecord diagnose(double t, const ScalarField& theta, const VectorField2& u, double s);

// Exponential filter exp(-36 (|m_k| / (n/2))^36) per axis.
ScalarField exponential_filter(const ScalarField& f);

// L2 norm of the out-of-band part relative to the L2 norm of f.
double out_of_band_fraction(const ScalarField& f);

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticRecord>& rows);
std::string format_diagnostic_row(const DiagnosticRecord& r);

}  // namespace sqg
