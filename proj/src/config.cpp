#include "sqg/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "sqg/errors.hpp"
#include "sqg/nonuniform.hpp"
#include "sqg/random_fields.hpp"

namespace sqg {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry> entries;
};

using Document = std::map<std::string, Section>;

Document tokenize(const std::string& text) {
  Document doc;
  std::istringstream is(text);
  std::string raw;
  std::string current;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) {
      continue;
    }
    if (s.front() == '[') {
      if (s.back() != ']') {
        throw ConfigError("line " + std::to_string(line) + ": unterminated section header", line);
      }
      current = trim(s.substr(1, s.size() - 2));
      if (doc.count(current) != 0) {
        throw ConfigError("line " + std::to_string(line) + ": duplicate section [" + current + "]", line);
      }
      doc[current].line = line;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'", line);
    }
    if (current.empty()) {
      throw ConfigError("line " + std::to_string(line) + ": key outside of any section", line);
    }
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line) + ": empty key", line);
    }
    auto& entries = doc[current].entries;
    if (entries.count(key) != 0) {
      throw ConfigError("line " + std::to_string(line) + ": duplicate key " + current + "." + key, line);
    }
    entries[key] = {trim(s.substr(eq + 1)), line, false};
  }
  return doc;
}

// Typed access with location-aware errors.
class Reader {
 public:
  explicit Reader(Document doc) : doc_(std::move(doc)) {}

  bool has_section(const std::string& sec) const { return doc_.count(sec) != 0; }

  Entry* find(const std::string& sec, const std::string& key) {
    auto s = doc_.find(sec);
    if (s == doc_.end()) {
      return nullptr;
    }
    auto e = s->second.entries.find(key);
    if (e == s->second.entries.end()) {
      return nullptr;
    }
    e->second.used = true;
    return &e->second;
  }

  [[noreturn]] static void fail(const Entry& e, const std::string& sec, const std::string& key, const std::string& why) {
    throw ConfigError("line " + std::to_string(e.line) + ": " + sec + "." + key + ": " + why + " (got '" + e.value +
                          "')",
                      e.line);
  }

  void real(const std::string& sec, const std::string& key, double& out) {
    if (Entry* e = find(sec, key)) {
      out = parse_real(*e, sec, key, e->value);
    }
  }

  void integer(const std::string& sec, const std::string& key, int& out) {
    if (Entry* e = find(sec, key)) {
      out = parse_int(*e, sec, key, e->value);
    }
  }

  void u64(const std::string& sec, const std::string& key, std::uint64_t& out) {
    if (Entry* e = find(sec, key)) {
      errno = 0;
      char* end = nullptr;
      const unsigned long long v = std::strtoull(e->value.c_str(), &end, 10);
      if (e->value.empty() || *end != '\0' || errno != 0 || e->value.front() == '-') {
        fail(*e, sec, key, "expected an unsigned 64-bit integer");
      }
      out = v;
    }
  }

  void boolean(const std::string& sec, const std::string& key, bool& out) {
    if (Entry* e = find(sec, key)) {
      if (e->value == "true") {
        out = true;
      } else if (e->value == "false") {
        out = false;
      } else {
        fail(*e, sec, key, "expected true or false");
      }
    }
  }

  void text(const std::string& sec, const std::string& key, std::string& out) {
    if (Entry* e = find(sec, key)) {
      out = e->value;
    }
  }

  void bumps(const std::string& sec, const std::string& key, std::vector<BumpParams>& out) {
    Entry* e = find(sec, key);
    if (e == nullptr) {
      return;
    }
    out.clear();
    std::istringstream groups(e->value);
    std::string group;
    while (std::getline(groups, group, ';')) {
      group = trim(group);
      if (group.empty()) {
        continue;
      }
      std::vector<double> v;
      std::istringstream parts(group);
      std::string part;
      while (std::getline(parts, part, ',')) {
        v.push_back(parse_real(*e, sec, key, trim(part)));
      }
      if (v.size() != 4) {
        fail(*e, sec, key, "each bump needs 'x1, x2, radius, amplitude'");
      }
      if (!(v[2] > 0.0)) {
        fail(*e, sec, key, "bump radius must be positive");
      }
      out.push_back({v[0], v[1], v[2], v[3]});
    }
  }

  void int_list(const std::string& sec, const std::string& key, std::vector<int>& out) {
    Entry* e = find(sec, key);
    if (e == nullptr) {
      return;
    }
    out.clear();
    std::istringstream parts(e->value);
    std::string part;
    while (std::getline(parts, part, ',')) {
      out.push_back(parse_int(*e, sec, key, trim(part)));
    }
  }

  void point(const std::string& sec, const std::string& key, double& a, double& b) {
    Entry* e = find(sec, key);
    if (e == nullptr) {
      return;
    }
    const auto comma = e->value.find(',');
    if (comma == std::string::npos) {
      fail(*e, sec, key, "expected 'x1, x2'");
    }
    a = parse_real(*e, sec, key, trim(e->value.substr(0, comma)));
    b = parse_real(*e, sec, key, trim(e->value.substr(comma + 1)));
  }

  // Location of a key for range errors raised after parsing.
  int line_of(const std::string& sec, const std::string& key) const {
    auto s = doc_.find(sec);
    if (s == doc_.end()) {
      return 0;
    }
    auto e = s->second.entries.find(key);
    return e == s->second.entries.end() ? s->second.line : e->second.line;
  }

  void reject_unknown() const {
    for (const auto& [name, sec] : doc_) {
      for (const auto& [key, e] : sec.entries) {
        if (!e.used) {
          throw ConfigError("line " + std::to_string(e.line) + ": unknown key " + name + "." + key, e.line);
        }
      }
    }
  }

 private:
  static double parse_real(const Entry& e, const std::string& sec, const std::string& key, const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || errno != 0 || !std::isfinite(v)) {
      fail(e, sec, key, "expected a finite real number");
    }
    return v;
  }

  static int parse_int(const Entry& e, const std::string& sec, const std::string& key, const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || errno != 0 || v < -2147483647L || v > 2147483647L) {
      fail(e, sec, key, "expected an integer");
    }
    return static_cast<int>(v);
  }

  Document doc_;
};

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"grid", {"n", "box_length"}},
      {"solver", {"dt", "t_end", "cfl_safety", "dealias", "filter", "diag_stride"}},
      {"run", {"formulation", "rng_seed"}},
      {"initial", {"preset", "amplitude", "kmax", "slope", "bumps"}},
      {"experiment", {"center", "base", "probe", "R", "s", "n_list"}},
      {"output", {"directory", "snapshot_stride", "snapshots"}},
      {"scaling", {"T"}},
  };
  return keys;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_bumps(const std::vector<BumpParams>& bumps) {
  std::string out;
  for (std::size_t i = 0; i < bumps.size(); ++i) {
    if (i > 0) {
      out += "; ";
    }
    out += fmt(bumps[i].x1) + ", " + fmt(bumps[i].x2) + ", " + fmt(bumps[i].radius) + ", " + fmt(bumps[i].amplitude);
  }
  return out;
}

}  // namespace

const char* to_string(Formulation f) {
  switch (f) {
    case Formulation::eulerian_theta:
      return "eulerian_theta";
    case Formulation::eulerian_u:
      return "eulerian_u";
    case Formulation::lagrangian:
      return "lagrangian";
  }
  return "?";
}

const char* to_string(Preset p) {
  switch (p) {
    case Preset::zero:
      return "zero";
    case Preset::shear:
      return "shear";
    case Preset::random_seeded:
      return "random_seeded";
    case Preset::bump_sum:
      return "bump_sum";
  }
  return "?";
}

RunConfig parse_config(const std::string& text) {
  Document doc = tokenize(text);
  for (const auto& [name, sec] : doc) {
    if (known_keys().count(name) == 0) {
      throw ConfigError("line " + std::to_string(sec.line) + ": unknown section [" + name + "]", sec.line);
    }
  }
  Reader r(std::move(doc));
  RunConfig c;

  auto range = [&](bool ok, const std::string& sec, const std::string& key, const std::string& why) {
    if (!ok) {
      const int line = r.line_of(sec, key);
      throw ConfigError("line " + std::to_string(line) + ": " + sec + "." + key + ": " + why, line);
    }
  };

  r.integer("grid", "n", c.grid.n);
  r.real("grid", "box_length", c.grid.box_length);
  range(c.grid.n >= 16 && c.grid.n % 2 == 0, "grid", "n", "must be even and >= 16");
  range(c.grid.box_length > 0.0, "grid", "box_length", "must be positive");

  r.real("solver", "dt", c.solver.dt);
  r.real("solver", "t_end", c.solver.t_end);
  r.real("solver", "cfl_safety", c.solver.cfl_safety);
  r.boolean("solver", "dealias", c.solver.dealias);
  r.boolean("solver", "filter", c.solver.filter);
  r.integer("solver", "diag_stride", c.solver.diag_stride);
  range(c.solver.dt >= 0.0, "solver", "dt", "must be >= 0 (0 picks dt from the CFL bound)");
  range(c.solver.t_end > 0.0, "solver", "t_end", "must be positive");
  range(c.solver.cfl_safety > 0.0 && c.solver.cfl_safety <= 1.0, "solver", "cfl_safety", "must lie in (0, 1]");
  range(c.solver.diag_stride >= 1, "solver", "diag_stride", "must be >= 1");

  if (Entry* e = r.find("run", "formulation")) {
    if (e->value == "eulerian_theta") {
      c.formulation = Formulation::eulerian_theta;
    } else if (e->value == "eulerian_u") {
      c.formulation = Formulation::eulerian_u;
    } else if (e->value == "lagrangian") {
      c.formulation = Formulation::lagrangian;
    } else {
      Reader::fail(*e, "run", "formulation", "expected eulerian_theta, eulerian_u or lagrangian");
    }
  }
  r.u64("run", "rng_seed", c.rng_seed);

  if (Entry* e = r.find("initial", "preset")) {
    if (e->value == "zero") {
      c.initial.preset = Preset::zero;
    } else if (e->value == "shear") {
      c.initial.preset = Preset::shear;
    } else if (e->value == "random_seeded") {
      c.initial.preset = Preset::random_seeded;
    } else if (e->value == "bump_sum") {
      c.initial.preset = Preset::bump_sum;
    } else {
      Reader::fail(*e, "initial", "preset", "expected zero, shear, random_seeded or bump_sum");
    }
  }
  r.real("initial", "amplitude", c.initial.amplitude);
  r.integer("initial", "kmax", c.initial.kmax);
  r.real("initial", "slope", c.initial.slope);
  r.bumps("initial", "bumps", c.initial.bumps);
  range(c.initial.kmax >= 1 && 3 * c.initial.kmax <= c.grid.n, "initial", "kmax",
        "must lie in [1, n/3] so the field fits the dealiased band");
  range(c.initial.preset != Preset::bump_sum || !c.initial.bumps.empty(), "initial", "bumps",
        "bump_sum needs at least one bump");

  if (r.has_section("experiment")) {
    ExperimentConfig e;
    r.point("experiment", "center", e.center_x1, e.center_x2);
    r.bumps("experiment", "base", e.base);
    r.bumps("experiment", "probe", e.probe);
    r.real("experiment", "R", e.R);
    r.real("experiment", "s", e.s);
    r.int_list("experiment", "n_list", e.n_list);
    range(r.find("experiment", "center") != nullptr, "experiment", "center", "missing (expected 'x1, x2')");
    range(!e.probe.empty(), "experiment", "probe", "at least one probe bump is required");
    range(e.R > 0.0, "experiment", "R", "must be positive");
    range(e.s >= 0.0, "experiment", "s", "must be >= 0");
    bool increasing = !e.n_list.empty();
    for (std::size_t i = 0; i < e.n_list.size(); ++i) {
      increasing = increasing && e.n_list[i] >= 1 && (i == 0 || e.n_list[i] > e.n_list[i - 1]);
    }
    range(increasing, "experiment", "n_list", "must be positive and strictly increasing");
    c.experiment = e;
  }

  r.text("output", "directory", c.output.directory);
  r.integer("output", "snapshot_stride", c.output.snapshot_stride);
  r.boolean("output", "snapshots", c.output.snapshots);
  range(!c.output.directory.empty(), "output", "directory", "must not be empty");
  range(c.output.snapshot_stride >= 0, "output", "snapshot_stride", "must be >= 0");

  r.real("scaling", "T", c.scaling.T);
  range(c.scaling.T > 0.0, "scaling", "T", "must be positive");

  r.reject_unknown();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw ConfigError("cannot read config " + path.string());
  }
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[grid]\n"
     << "n = " << c.grid.n << "\n"
     << "box_length = " << fmt(c.grid.box_length) << "\n\n";
  os << "[solver]\n"
     << "dt = " << fmt(c.solver.dt) << "\n"
     << "t_end = " << fmt(c.solver.t_end) << "\n"
     << "cfl_safety = " << fmt(c.solver.cfl_safety) << "\n"
     << "dealias = " << (c.solver.dealias ? "true" : "false") << "\n"
     << "filter = " << (c.solver.filter ? "true" : "false") << "\n"
     << "diag_stride = " << c.solver.diag_stride << "\n\n";
  os << "[run]\n"
     << "formulation = " << to_string(c.formulation) << "\n"
     << "rng_seed = " << c.rng_seed << "\n\n";
  os << "[initial]\n"
     << "preset = " << to_string(c.initial.preset) << "\n"
     << "amplitude = " << fmt(c.initial.amplitude) << "\n"
     << "kmax = " << c.initial.kmax << "\n"
     << "slope = " << fmt(c.initial.slope) << "\n";
  if (!c.initial.bumps.empty()) {
    os << "bumps = " << fmt_bumps(c.initial.bumps) << "\n";
  }
  os << "\n";
  if (c.experiment) {
    const ExperimentConfig& e = *c.experiment;
    os << "[experiment]\n"
       << "center = " << fmt(e.center_x1) << ", " << fmt(e.center_x2) << "\n";
    if (!e.base.empty()) {
      os << "base = " << fmt_bumps(e.base) << "\n";
    }
    os << "probe = " << fmt_bumps(e.probe) << "\n"
       << "R = " << fmt(e.R) << "\n"
       << "s = " << fmt(e.s) << "\n"
       << "n_list = ";
    for (std::size_t i = 0; i < e.n_list.size(); ++i) {
      os << (i > 0 ? ", " : "") << e.n_list[i];
    }
    os << "\n\n";
  }
  os << "[output]\n"
     << "directory = " << c.output.directory << "\n"
     << "snapshot_stride = " << c.output.snapshot_stride << "\n"
     << "snapshots = " << (c.output.snapshots ? "true" : "false") << "\n\n";
  os << "[scaling]\n"
     << "T = " << fmt(c.scaling.T) << "\n";
  return os.str();
}

TimeStepConfig RunConfig::time_step() const {
  TimeStepConfig t;
  t.dt = solver.dt;
  t.t_end = solver.t_end;
  t.cfl_safety = solver.cfl_safety;
  t.dealias = solver.dealias;
  t.filter = solver.filter;
  t.diag_stride = solver.diag_stride;
  t.snapshot_stride = output.snapshot_stride;
  return t;
}

ScalarField bump_sum(const std::vector<BumpParams>& bumps, GridPtr grid) {
  ScalarField out(grid);
  for (const auto& b : bumps) {
    out = out + bump({b.x1, b.x2}, b.radius, b.amplitude, grid, false);
  }
  return out;
}

ScalarField initial_theta(const RunConfig& cfg, GridPtr grid) {
  switch (cfg.initial.preset) {
    case Preset::zero:
      return ScalarField(grid);
    case Preset::shear: {
      const double k = 2.0 * std::numbers::pi / grid->box_length();
      const double a = cfg.initial.amplitude;
      return ScalarField::from_function(grid, [&](double x1, double) { return a * std::sin(k * x1); });
    }
    case Preset::random_seeded:
      return random_band_limited(grid, cfg.rng_seed, {cfg.initial.kmax, cfg.initial.slope, cfg.initial.amplitude});
    case Preset::bump_sum:
      return bump_sum(cfg.initial.bumps, grid);
  }
  throw InvalidArgument("unknown preset");
}

HumpSpec make_hump_spec(const RunConfig& cfg) {
  if (!cfg.experiment) {
    throw ConfigError("experiment: missing [experiment] section (center, probe, R, s, n_list)");
  }
  const ExperimentConfig& e = *cfg.experiment;
  const GridPtr grid = make_grid(cfg.grid.n, cfg.grid.box_length);
  HumpSpec spec{{e.center_x1, e.center_x2}, bump_sum(e.base, grid), bump_sum(e.probe, grid), e.R, e.s, e.n_list};
  try {
    spec.validate();
  } catch (const InvalidArgument& err) {
    throw ConfigError(std::string("experiment: ") + err.what());
  }
  return spec;
}

}  // namespace sqg
