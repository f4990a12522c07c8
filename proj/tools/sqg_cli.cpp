// sqg: command-line front end.
//
//   sqg simulate   --config run.ini [--out dir] [--seed n] [--quiet]
//   sqg check      --config run.ini
//   sqg nonuniform --config run.ini
//   sqg scaling    --config run.ini
//
// Exit codes: 0 ok, 1 configuration error, 2 solver abort, 3 failed checks.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sqg/checks.hpp"
#include "sqg/config.hpp"
#include "sqg/errors.hpp"
#include "sqg/eulerian.hpp"
#include "sqg/geodesic.hpp"
#include "sqg/nonuniform.hpp"
#include "sqg/operators.hpp"
#include "sqg/random_fields.hpp"
#include "sqg/snapshot.hpp"

namespace fs = std::filesystem;
using namespace sqg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAbort = 2;
constexpr int kExitChecks = 3;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

struct Context {
  RunConfig cfg;
  fs::path out;
  bool quiet = false;

  void say(const std::string& s) const {
    if (!quiet) {
      std::cout << s << '\n';
    }
  }
};

Context load(const Options& o) {
  Context c;
  c.cfg = load_config(o.config);
  if (!o.out.empty()) {
    c.cfg.output.directory = o.out;
  }
  if (o.seed) {
    c.cfg.rng_seed = *o.seed;
  }
  c.out = c.cfg.output.directory;
  c.quiet = o.quiet;
  fs::create_directories(c.out);
  std::ofstream(c.out / "config.ini", std::ios::trunc) << serialize_config(c.cfg);
  return c;
}

std::string snapshot_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%04d.sqgf", index);
  return buf;
}

// Streams diagnostic rows so that an aborted run still leaves its history.
class DiagnosticWriter {
 public:
  explicit DiagnosticWriter(const fs::path& path) : os_(path, std::ios::trunc) {
    if (!os_) {
      throw Error("cannot open " + path.string());
    }
    os_ << "t,l2,linf,hs,div_diag\n";
  }
  void operator()(const DiagnosticRecord& r) { os_ << format_diagnostic_row(r) << '\n' << std::flush; }

 private:
  std::ofstream os_;
};

int simulate(const Context& c) {
  const GridPtr grid = make_grid(c.cfg.grid.n, c.cfg.grid.box_length);
  const ScalarField theta0 = band_project(initial_theta(c.cfg, grid));
  TimeStepConfig ts = c.cfg.time_step();
  auto writer = std::make_shared<DiagnosticWriter>(c.out / "diagnostics.csv");
  ts.on_diagnostic = [writer](const DiagnosticRecord& r) { (*writer)(r); };

  const bool snaps = c.cfg.output.snapshots;
  switch (c.cfg.formulation) {
    case Formulation::eulerian_theta: {
      const EulerianTrajectory traj = solve_theta(theta0, ts);
      for (std::size_t i = 0; snaps && i < traj.times.size(); ++i) {
        write_snapshot(c.out / snapshot_name(static_cast<int>(i)), "theta", traj.theta[i]);
      }
      c.say("eulerian_theta: " + std::to_string(traj.steps) + " steps, dt = " + std::to_string(traj.dt));
      break;
    }
    case Formulation::eulerian_u: {
      const EulerianTrajectory traj = solve_u(velocity_from_theta(theta0), ts);
      for (std::size_t i = 0; snaps && i < traj.times.size(); ++i) {
        write_snapshot(c.out / snapshot_name(static_cast<int>(i)),
                       {{"theta", traj.theta[i]}, {"u:x", traj.u[i].x()}, {"u:y", traj.u[i].y()}});
      }
      c.say("eulerian_u: " + std::to_string(traj.steps) + " steps, dt = " + std::to_string(traj.dt));
      break;
    }
    case Formulation::lagrangian: {
      // diagnostics come from the Eulerian reconstruction at every kept state
      ts.snapshot_stride = ts.diag_stride;
      const GeodesicTrajectory traj = solve_geodesic(velocity_from_theta(theta0), ts);
      const int keep = c.cfg.output.snapshot_stride;
      int written = 0;
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const FlowState& s = traj.states[i];
        const DiffeoMap inv = invert_diffeo(s.phi);
        const ScalarField theta = compose_scalar(theta0, inv);
        const VectorField2 u = compose_vector(s.v, inv);
        (*writer)(diagnose(traj.times[i], theta, u, ts.diag_s));
        const int step = static_cast<int>(std::lround(traj.times[i] / traj.dt));
        const bool last = i + 1 == traj.times.size();
        if (snaps && (i == 0 || last || (keep > 0 && step % keep == 0))) {
          write_snapshot(c.out / snapshot_name(written++),
                         {{"theta", theta},
                          {"DISP:x", s.phi.displacement().x()},
                          {"DISP:y", s.phi.displacement().y()},
                          {"v:x", s.v.x()},
                          {"v:y", s.v.y()}});
        }
      }
      c.say("lagrangian: " + std::to_string(traj.steps) + " steps, dt = " + std::to_string(traj.dt));
      break;
    }
  }
  c.say("wrote " + (c.out / "diagnostics.csv").string());
  return kExitOk;
}

int check(const Context& c) {
  const auto results = run_checks(c.cfg);
  bool all = true;
  std::ofstream csv(c.out / "check.csv", std::ios::trunc);
  csv << "check,value,tolerance,result\n";
  if (!c.quiet) {
    std::printf("%-26s %-12s %-12s %s\n", "check", "value", "tolerance", "result");
  }
  for (const auto& r : results) {
    all = all && r.pass;
    char line[256];
    std::snprintf(line, sizeof line, "%-26s %-12.3e %-12.3e %s", r.name.c_str(), r.value, r.tolerance,
                  r.pass ? "PASS" : "FAIL");
    if (!c.quiet || !r.pass) {
      std::cout << line << (r.note.empty() ? "" : "  (" + r.note + ")") << '\n';
    }
    csv << r.name << ',' << r.value << ',' << r.tolerance << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
  }
  return all ? kExitOk : kExitChecks;
}

// Bounding-box diagonal of the support in the minimum-image frame of its first
// point.
double support_diameter(const ScalarField& f) {
  const auto pts = support_points(f);
  if (pts.empty()) {
    return 0.0;
  }
  double lo1 = 0, hi1 = 0, lo2 = 0, hi2 = 0;
  for (const Point& p : pts) {
    const Point d = periodic_delta(f.grid(), pts.front(), p);
    lo1 = std::min(lo1, d.x1);
    hi1 = std::max(hi1, d.x1);
    lo2 = std::min(lo2, d.x2);
    hi2 = std::max(hi2, d.x2);
  }
  return std::hypot(hi1 - lo1, hi2 - lo2);
}

int nonuniform(const Context& c) {
  const HumpSpec spec = make_hump_spec(c.cfg);
  TimeStepConfig ts = c.cfg.time_step();
  const NonuniformResult res = run_nonuniform(spec, ts);
  write_nonuniform_csv(c.out / "nonuniform.csv", res.rows);
  {
    std::ofstream meta(c.out / "nonuniform_meta.txt", std::ios::trunc);
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "n_grid = %d\nbox_length = %.17g\nm = %.17g\nL_lip = %.17g\nv_norm = %.17g\n"
                  "support_diameter_theta0 = %.17g\nsupport_diameter_v = %.17g\n",
                  c.cfg.grid.n, c.cfg.grid.box_length, res.constants.m, res.constants.L_lip, res.constants.v_norm,
                  support_diameter(spec.base_theta), support_diameter(spec.probe));
    meta << buf;
  }
  int ok = 0;
  for (const auto& r : res.rows) {
    ok += r.ok() ? 1 : 0;
    char line[512];
    std::snprintf(line, sizeof line, "n=%d r_n=%.4g input=%.4g output=%.4g sep=%.4g ratio=%.4g %s (%.1fs)", r.n,
                  r.r_n, r.input_dist, r.output_dist, r.hump_sep, r.ratio, r.status.c_str(), r.runtime_s);
    c.say(line);
  }
  return ok > 0 ? kExitOk : kExitAbort;
}

int scaling(const Context& c) {
  const GridPtr grid = make_grid(c.cfg.grid.n, c.cfg.grid.box_length);
  const ScalarField theta0 = band_project(initial_theta(c.cfg, grid));
  const double T = c.cfg.scaling.T;
  const double err = scaling_check(theta0, T, c.cfg.time_step());
  std::ofstream csv(c.out / "scaling.csv", std::ios::trunc);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", T, err);
  csv << "T,rel_error\n" << buf;
  char msg[128];
  std::snprintf(msg, sizeof msg, "scaling T = %g: relative error %.3e", T, err);
  c.say(msg);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral SQG simulator"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "run configuration (INI)")->required();
    sub->add_option("--out", opt.out, "output directory (overrides [output] directory)");
    sub->add_option("--seed", opt.seed, "RNG seed (overrides [run] rng_seed)");
    sub->add_flag("--quiet", opt.quiet, "only print failures");
  };
  auto* sim = app.add_subcommand("simulate", "integrate the configured formulation");
  auto* chk = app.add_subcommand("check", "run the invariant suite");
  auto* non = app.add_subcommand("nonuniform", "gliding-hump experiment");
  auto* sca = app.add_subcommand("scaling", "time-scaling identity check");
  for (auto* s : {sim, chk, non, sca}) {
    add_common(s);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    const Context c = load(opt);
    if (sim->parsed()) {
      return simulate(c);
    }
    if (chk->parsed()) {
      return check(c);
    }
    if (non->parsed()) {
      return nonuniform(c);
    }
    return scaling(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverAbort& e) {
    std::cerr << "solver abort: " << e.what() << '\n';
    return kExitAbort;
  } catch (const DiffeoError& e) {
    std::cerr << "solver abort: " << e.what() << '\n';
    return kExitAbort;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAbort;
  }
}
