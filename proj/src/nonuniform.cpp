#include "sqg/nonuniform.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "sqg/errors.hpp"
#include "sqg/operators.hpp"

namespace sqg {
namespace {

constexpr double kSupportThreshold = 1e-12;

double wrap(double d, double L) { return d - L * std::round(d / L); }

std::vector<char> support_mask(const ScalarField& f) {
  const double cut = kSupportThreshold * grid_max_abs(f);
  std::vector<char> mask(f.size(), 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    mask[i] = std::abs(f.data()[i]) > cut ? 1 : 0;
  }
  return mask;
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

double periodic_distance(const Grid& g, Point a, Point b) {
  const Point d = periodic_delta(g, a, b);
  return std::hypot(d.x1, d.x2);
}

Point periodic_delta(const Grid& g, Point a, Point b) {
  return {wrap(b.x1 - a.x1, g.box_length()), wrap(b.x2 - a.x2, g.box_length())};
}

ScalarField bump(Point center, double radius, double amplitude, GridPtr grid, bool remove_mean, double* leak) {
  const Grid& g = *grid;
  if (!(radius > 2.0 * g.dx())) {
    throw UnderResolved("bump radius " + std::to_string(radius) + " must exceed 2 dx = " + std::to_string(2.0 * g.dx()));
  }
  ScalarField f = ScalarField::from_function(grid, [&](double x1, double x2) {
    const double d = periodic_distance(g, center, {x1, x2});
    if (d >= radius) {
      return 0.0;
    }
    const double q = d * d / (radius * radius);
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - q));
  });
  double lk = 0.0;
  if (remove_mean) {
    const double m = mean(f);
    RealBuffer& v = f.mutable_values();
    for (double& x : v) {
      x -= m;
    }
    lk = amplitude != 0.0 ? std::abs(m / amplitude) : 0.0;
  }
  if (leak != nullptr) {
    *leak = lk;
  }
  return f;
}

std::vector<Point> support_points(const ScalarField& f) {
  const Grid& g = f.grid();
  const auto mask = support_mask(f);
  std::vector<Point> out;
  for (int j = 0; j < g.n(); ++j) {
    for (int i = 0; i < g.n(); ++i) {
      if (mask[static_cast<std::size_t>(j) * g.n() + i]) {
        out.push_back({g.x(i), g.x(j)});
      }
    }
  }
  return out;
}

double distance_to_support(const ScalarField& f, Point p) {
  double best = std::numeric_limits<double>::infinity();
  if (grid_max_abs(f) == 0.0) {
    return best;
  }
  for (const Point& q : support_points(f)) {
    best = std::min(best, periodic_distance(f.grid(), p, q));
  }
  return best;
}

void HumpSpec::validate() const {
  require_same_grid(base_theta.grid(), probe.grid(), "HumpSpec");
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw InvalidArgument("HumpSpec: R must be positive");
  }
  SobolevIndex{s};
  if (n_list.empty()) {
    throw InvalidArgument("HumpSpec: n_list is empty");
  }
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1 || (i > 0 && n_list[i] <= n_list[i - 1])) {
      throw InvalidArgument("HumpSpec: n_list must be positive and strictly increasing");
    }
  }
  const double d = distance_to_support(base_theta, center);
  if (d < 2.0) {
    throw InvalidArgument("HumpSpec: dist(x*, supp theta0) = " + std::to_string(d) + " < 2");
  }
  for (const Point& q : support_points(probe)) {
    const Point delta = periodic_delta(probe.grid(), center, q);
    if (!(delta.x1 < 0.0 && delta.x2 < 0.0)) {
      throw InvalidArgument("HumpSpec: probe support point (" + std::to_string(q.x1) + ", " + std::to_string(q.x2) +
                            ") is not left-down of x*");
    }
  }
}

double lab_norm(const ScalarField& f, double s) { return sobolev_norm(f, SobolevIndex(s), true); }

DiffeoMap exp_tilde(const ScalarField& theta, const TimeStepConfig& cfg, const GeodesicOptions& opt) {
  return exp_map(velocity_from_theta(theta), 1.0, cfg, opt);
}

MeasuredConstants measure_constants(const HumpSpec& spec, const TimeStepConfig& cfg, const GeodesicOptions& opt) {
  spec.validate();
  MeasuredConstants c;
  c.v_norm = lab_norm(spec.probe, spec.s);
  if (c.v_norm == 0.0) {
    throw DegenerateProbe("probe v is zero; pick a different v");
  }
  const double eps = 1e-3 * spec.R;
  const DiffeoMap plus = exp_tilde(axpy(spec.base_theta, eps, spec.probe), cfg, opt);
  const DiffeoMap minus = exp_tilde(axpy(spec.base_theta, -eps, spec.probe), cfg, opt);
  const Point a = apply(plus, spec.center);
  const Point b = apply(minus, spec.center);
  const Point d = periodic_delta(spec.probe.grid(), b, a);
  c.m = std::hypot(d.x1, d.x2) / (2.0 * eps) / c.v_norm;
  if (!(c.m >= 1e-8)) {
    throw DegenerateProbe("probe response m = " + std::to_string(c.m) + " < 1e-8; pick a different v");
  }
  c.L_lip = max_stretch(exp_tilde(spec.base_theta, cfg, opt));
  return c;
}

double hump_radius(const MeasuredConstants& consts, int n) {
  return consts.m * consts.v_norm / (8.0 * n * consts.L_lip);
}

SequencePair build_sequences(const HumpSpec& spec, const MeasuredConstants& consts, int n) {
  if (n < 1) {
    throw InvalidArgument("n must be >= 1");
  }
  const Grid& g = spec.base_theta.grid();
  SequencePair out{n, hump_radius(consts, n), ScalarField(spec.base_theta.grid_ptr()), spec.base_theta,
                   spec.base_theta};
  if (out.r_n < 4.0 * g.dx()) {
    throw UnderResolved("r_n = " + std::to_string(out.r_n) + " < 4 dx = " + std::to_string(4.0 * g.dx()) +
                        " for n = " + std::to_string(n) + "; use a finer grid or a smaller n");
  }
  const ScalarField raw = bump(spec.center, out.r_n, 1.0, spec.base_theta.grid_ptr(), false);
  out.w = (0.5 * spec.R / lab_norm(raw, spec.s)) * raw;
  out.theta = spec.base_theta + out.w;
  out.theta_tilde = axpy(out.theta, 1.0 / n, spec.probe);
  return out;
}

NonuniformResult run_nonuniform(const HumpSpec& spec, const TimeStepConfig& cfg, const GeodesicOptions& opt) {
  NonuniformResult result;
  result.constants = measure_constants(spec, cfg, opt);
  result.rows = run_rows(spec, result.constants, cfg, opt);
  return result;
}

std::vector<ExperimentRecord> run_rows(const HumpSpec& spec, const MeasuredConstants& consts,
                                       const TimeStepConfig& cfg, const GeodesicOptions& opt) {
  spec.validate();
  std::vector<ExperimentRecord> rows;
  TimeStepConfig unit = cfg;
  unit.t_end = 1.0;
  unit.snapshot_stride = 0;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (int n : spec.n_list) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentRecord row;
    row.n = n;
    row.r_n = hump_radius(consts, n);
    row.input_dist = nan;
    row.output_dist = nan;
    row.hump_sep = nan;
    row.ratio = nan;
    try {
      const SequencePair pair = build_sequences(spec, consts, n);
      row.input_dist = lab_norm(pair.theta_tilde - pair.theta, spec.s);
      const FlowSolution a = solve_via_flow_detailed(pair.theta, 1.0, unit, opt);
      const FlowSolution b = solve_via_flow_detailed(pair.theta_tilde, 1.0, unit, opt);
      row.output_dist = lab_norm(a.theta - b.theta, spec.s);
      const Point pa = apply(a.phi, spec.center);
      const Point pb = apply(b.phi, spec.center);
      row.hump_sep = periodic_distance(spec.base_theta.grid(), pa, pb);
      row.ratio = row.output_dist / row.input_dist;
      row.status = row.r_n > 1.0 ? "ok;r_n>1" : "ok";
    } catch (const Error& e) {
      row.status = "error:" + csv_safe(e.what());
    }
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(row);
  }

  // input_dist must fall strictly with n
  double last = std::numeric_limits<double>::infinity();
  for (auto& row : rows) {
    if (!row.ok()) {
      continue;
    }
    if (!(row.input_dist < last)) {
      row.status += ";input_not_decreasing";
    }
    last = row.input_dist;
  }
  return rows;
}

void write_nonuniform_csv(const std::filesystem::path& path, const std::vector<ExperimentRecord>& rows) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  os << "n,r_n,input_dist,output_dist,hump_sep,ratio,status\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,", r.n, r.r_n, r.input_dist, r.output_dist,
                  r.hump_sep, r.ratio);
    os << buf << r.status << '\n';
  }
}

double scaling_check(const ScalarField& theta0, double T, const TimeStepConfig& cfg) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw InvalidArgument("scaling_check: T must be positive");
  }
  const double base = l2_norm(theta0);
  if (base == 0.0) {
    return 0.0;
  }
  TimeStepConfig left = cfg;
  left.t_end = T;
  left.snapshot_stride = 0;
  const StepPlan plan = plan_steps(left, grid_max_abs(velocity_from_theta(theta0)), theta0.grid().dx());
  left.dt = plan.dt;
  TimeStepConfig right = left;
  right.t_end = 1.0;

  const ScalarField lhs = solve_theta(theta0, left).final_theta();
  const ScalarField rhs = (1.0 / T) * solve_theta(T * theta0, right).final_theta();
  return l2_norm(lhs - rhs) / base;
}

double disjoint_support_norm_check(const ScalarField& f, const ScalarField& g, double s) {
  require_same_grid(f.grid(), g.grid(), "disjoint_support_norm_check");
  const auto mf = support_mask(f);
  const auto mg = support_mask(g);
  if (grid_max_abs(f) > 0.0 && grid_max_abs(g) > 0.0) {
    for (std::size_t i = 0; i < mf.size(); ++i) {
      if (mf[i] && mg[i]) {
        throw InvalidArgument("supports overlap");
      }
    }
  }
  const double denom = lab_norm(f, s) + lab_norm(g, s);
  if (denom == 0.0) {
    throw InvalidArgument("both fields are zero");
  }
  return lab_norm(f + g, s) / denom;
}

}  // namespace sqg
