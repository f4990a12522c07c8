#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sqg/eulerian.hpp"
#include "sqg/geodesic.hpp"

namespace sqg {

// Smooth compactly supported bump a * exp(1 - 1 / (1 - d^2 / r^2)) for periodic
// distance d < r. Requires r > 2 dx. With `remove_mean` the grid mean is
// subtracted afterwards and `leak` (if given) receives |mean| / |a|, the
// constant the field then carries outside the disk.
ScalarField bump(Point center, double radius, double amplitude, GridPtr grid, bool remove_mean = true,
                 double* leak = nullptr);

// Minimum-image distance on the box.
double periodic_distance(const Grid& g, Point a, Point b);
// Minimum-image displacement b - a.
Point periodic_delta(const Grid& g, Point a, Point b);

// Grid points where |f| > 1e-12 * max|f|.
std::vector<Point> support_points(const ScalarField& f);
// Periodic distance from p to the support of f; +inf for f = 0.
double distance_to_support(const ScalarField& f, Point p);

struct HumpSpec {
  Point center;             // x*
  ScalarField base_theta;   // theta_0, compactly supported
  ScalarField probe;        // v, supported strictly left-down of x*
  double R = 0.1;           // ball radius
  double s = 2.5;           // Sobolev index of every lab norm
  std::vector<int> n_list{1, 2, 4, 8};

  // dist(x*, supp theta_0) >= 2, probe left-down of x*, R > 0, s >= 0,
  // n_list positive and strictly increasing. Throws InvalidArgument.
  void validate() const;
};

// H^s norm used throughout the lab: truncated to the dealiased band.
double lab_norm(const ScalarField& f, double s);

// exp~(theta) = exp(velocity_from_theta(theta)), the time-1 flow map.
DiffeoMap exp_tilde(const ScalarField& theta, const TimeStepConfig& cfg, const GeodesicOptions& opt = {});

struct MeasuredConstants {
  double m = 0.0;        // |d exp~_theta0 (v)(x*)| / ||v||_s
  double L_lip = 0.0;    // max singular value of d exp~(theta0)
  double v_norm = 0.0;   // ||v||_s
};

// Central difference with eps = 1e-3 R. Throws DegenerateProbe when ||v||_s = 0
// or m < 1e-8.
MeasuredConstants measure_constants(const HumpSpec& spec, const TimeStepConfig& cfg,
                                    const GeodesicOptions& opt = {});

struct SequencePair {
  int n = 0;
  double r_n = 0.0;
  ScalarField w;            // hump at x*, ||w||_s = R / 2
  ScalarField theta;        // theta_0 + w
  ScalarField theta_tilde;  // theta + v / n
};

// r_n = m ||v||_s / (8 n L_lip). Throws UnderResolved when r_n < 4 dx.
SequencePair build_sequences(const HumpSpec& spec, const MeasuredConstants& consts, int n);
double hump_radius(const MeasuredConstants& consts, int n);

struct ExperimentRecord {
  int n = 0;
  double r_n = 0.0;
  double input_dist = 0.0;
  double output_dist = 0.0;
  double hump_sep = 0.0;
  double ratio = 0.0;
  std::string status;  // "ok", "ok;r_n>1", or "error:<reason>"
  double runtime_s = 0.0;
  bool ok() const { return status.rfind("ok", 0) == 0; }
};

struct NonuniformResult {
  MeasuredConstants constants;
  std::vector<ExperimentRecord> rows;  // ascending n
};

// Phi = solve_via_flow at T = 1 for both members of each pair. Row failures
// are recorded in `status`; the remaining rows still run.
NonuniformResult run_nonuniform(const HumpSpec& spec, const TimeStepConfig& cfg, const GeodesicOptions& opt = {});
// Same with constants supplied by the caller (no measurement runs).
std::vector<ExperimentRecord> run_rows(const HumpSpec& spec, const MeasuredConstants& consts,
                                       const TimeStepConfig& cfg, const GeodesicOptions& opt = {});

void write_nonuniform_csv(const std::filesystem::path& path, const std::vector<ExperimentRecord>& rows);

// || Phi_T(theta0) - Phi(T theta0) / T ||_{L2} / ||theta0||_{L2}, both sides
// by solve_theta with the same dt; the right side therefore takes 1/T times
// as many steps. Zero for theta0 = 0.
double scaling_check(const ScalarField& theta0, double T, const TimeStepConfig& cfg);

// ||f + g||_s / (||f||_s + ||g||_s) with the lab norm. Throws InvalidArgument
// if the supports (1e-12 threshold) overlap.
double disjoint_support_norm_check(const ScalarField& f, const ScalarField& g, double s);

}  // namespace sqg
