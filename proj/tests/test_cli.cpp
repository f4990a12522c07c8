// End-to-end runs of the sqg binary: exit codes, output files, determinism.

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sqg_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.ini";
  std::ofstream(p) << text;
  return p;
}

struct Run {
  int code = -1;
  std::string output;  // stdout and stderr
};

Run sqg(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "log.txt";
  const std::string cmd = std::string(SQG_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream is(log);
  std::ostringstream ss;
  ss << is.rdbuf();
  r.output = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream is(p);
  std::string line;
  std::getline(is, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    std::vector<double> row;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    rows.push_back(row);
  }
  return rows;
}

const char* kSmall = R"([grid]
n = 32

[solver]
t_end = 0.1

[run]
formulation = %FORM%
rng_seed = 5

[initial]
preset = %PRESET%
kmax = 3
)";

std::string small(const std::string& form, const std::string& preset) {
  std::string s = kSmall;
  s.replace(s.find("%FORM%"), 6, form);
  s.replace(s.find("%PRESET%"), 8, preset);
  return s;
}

}  // namespace

TEST_CASE("zero preset completes with all-zero diagnostics") {
  const fs::path d = scratch("zero");
  const Run r = sqg("simulate --quiet --config " + write_config(d, small("eulerian_theta", "zero")).string() +
                        " --out " + (d / "out").string(),
                    d);
  CHECK(r.code == 0);
  const auto rows = read_csv(d / "out" / "diagnostics.csv");
  REQUIRE(!rows.empty());
  for (const auto& row : rows) {
    REQUIRE(row.size() == 5);
    for (std::size_t k = 1; k < 5; ++k) {
      CHECK(row[k] == 0.0);
    }
  }
  CHECK(fs::exists(d / "out" / "config.ini"));
  CHECK(fs::exists(d / "out" / "snap_0000.sqgf"));
}

TEST_CASE("shear preset keeps its diagnostics constant") {
  for (const char* form : {"eulerian_theta", "eulerian_u", "lagrangian"}) {
    CAPTURE(form);
    const fs::path d = scratch(std::string("shear_") + form);
    const Run r = sqg("simulate --quiet --config " + write_config(d, small(form, "shear")).string() + " --out " +
                          (d / "out").string(),
                      d);
    CHECK(r.code == 0);
    const auto rows = read_csv(d / "out" / "diagnostics.csv");
    REQUIRE(rows.size() >= 2);
    for (const auto& row : rows) {
      for (std::size_t k = 1; k < 4; ++k) {
        CHECK(std::abs(row[k] - rows.front()[k]) <= 1e-10 * std::max(1.0, std::abs(rows.front()[k])));
      }
    }
  }
}

TEST_CASE("seeded random runs are bit identical and the seed flag matters") {
  const fs::path d = scratch("seeded");
  const fs::path cfg = write_config(d, small("eulerian_u", "random_seeded"));
  CHECK(sqg("simulate --quiet --config " + cfg.string() + " --out " + (d / "a").string(), d).code == 0);
  CHECK(sqg("simulate --quiet --config " + cfg.string() + " --out " + (d / "b").string(), d).code == 0);
  CHECK(sqg("simulate --quiet --config " + cfg.string() + " --seed 6 --out " + (d / "c").string(), d).code == 0);
  CHECK(slurp(d / "a" / "diagnostics.csv") == slurp(d / "b" / "diagnostics.csv"));
  CHECK(slurp(d / "a" / "snap_0001.sqgf") == slurp(d / "b" / "snap_0001.sqgf"));
  CHECK(slurp(d / "a" / "diagnostics.csv") != slurp(d / "c" / "diagnostics.csv"));
  CHECK(slurp(d / "c" / "config.ini").find("rng_seed = 6") != std::string::npos);
}

TEST_CASE("Lagrangian snapshots carry the displacement") {
  const fs::path d = scratch("lag");
  const Run r = sqg("simulate --quiet --config " + write_config(d, small("lagrangian", "random_seeded")).string() +
                        " --out " + (d / "out").string(),
                    d);
  CHECK(r.code == 0);
  const std::string snap = slurp(d / "out" / "snap_0001.sqgf");
  CHECK(snap.find("DISP:x") != std::string::npos);
  CHECK(snap.find("DISP:y") != std::string::npos);
}

TEST_CASE("configuration errors exit 1 with a line-precise message") {
  const fs::path d = scratch("badcfg");
  Run r = sqg("simulate --config " + write_config(d, "[grid]\nn = 17\n").string(), d);
  CHECK(r.code == 1);
  CHECK(r.output.find("line 2") != std::string::npos);
  CHECK(r.output.find("grid.n") != std::string::npos);
  r = sqg("simulate --config " + (d / "missing.ini").string(), d);
  CHECK(r.code == 1);
  r = sqg("simulate", d);
  CHECK(r.code == 1);
  r = sqg("frobnicate --config x", d);
  CHECK(r.code == 1);
}

TEST_CASE("solver abort exits 2") {
  const fs::path d = scratch("abort");
  std::string text = small("eulerian_theta", "random_seeded");
  text.replace(text.find("t_end = 0.1"), 11, "t_end = 4\ndt = 2");
  const Run r = sqg("simulate --config " + write_config(d, text).string() + " --out " + (d / "out").string(), d);
  CHECK(r.code == 2);
  CHECK(r.output.find("CFL") != std::string::npos);
  // the initial diagnostics row was written before the abort
  CHECK(read_csv(d / "out" / "diagnostics.csv").size() == 1);
}

TEST_CASE("check passes on the default config") {
  const fs::path d = scratch("check");
  const Run r = sqg("check --config " + std::string(SQG_CONFIG_DIR) + "/default.ini --out " + (d / "out").string(), d);
  CHECK(r.code == 0);
  CHECK(r.output.find("FAIL") == std::string::npos);
  CHECK(r.output.find("prop4_equivalence") != std::string::npos);
}

TEST_CASE("check still runs on the 16 point grid") {
  const fs::path d = scratch("check16");
  const Run r =
      sqg("check --config " + std::string(SQG_CONFIG_DIR) + "/minimal16.ini --out " + (d / "out").string(), d);
  CHECK(r.code == 0);
}

TEST_CASE("check without dealiasing reports the measured value") {
  const fs::path d = scratch("check_nodealias");
  std::string text = small("eulerian_theta", "random_seeded");
  text.replace(text.find("t_end = 0.1"), 11, "t_end = 0.1\ndealias = false");
  const Run r = sqg("check --config " + write_config(d, text).string() + " --out " + (d / "out").string(), d);
  CHECK((r.code == 0 || r.code == 3));
  CHECK(r.output.find("dealiasing off") != std::string::npos);
  CHECK(slurp(d / "out" / "check.csv").find("prop4_equivalence,") != std::string::npos);
}

TEST_CASE("check exits 3 when a check fails") {
  // a CFL-limited dt so coarse that the Lagrangian path drifts past 1e-3
  const fs::path d = scratch("check_fail");
  std::string text = small("eulerian_theta", "random_seeded");
  text.replace(text.find("t_end = 0.1"), 11, "t_end = 0.5\ncfl_safety = 1");
  text.replace(text.find("kmax = 3"), 8, "kmax = 10\namplitude = 4");
  const Run r = sqg("check --config " + write_config(d, text).string() + " --out " + (d / "out").string(), d);
  CHECK(r.code == 3);
  CHECK(r.output.find("FAIL") != std::string::npos);
}

TEST_CASE("nonuniform without an experiment block exits 1 naming the section") {
  const fs::path d = scratch("nonuniform_missing");
  const Run r = sqg("nonuniform --config " + write_config(d, small("lagrangian", "zero")).string() + " --out " +
                        (d / "out").string(),
                    d);
  CHECK(r.code == 1);
  CHECK(r.output.find("[experiment]") != std::string::npos);
}

TEST_CASE("nonuniform records under-resolved rows, exits 2 and stays deterministic") {
  // measured m keeps r_n far below 4 dx here, so every row errors
  const fs::path d = scratch("nonuniform");
  const std::string text = R"([grid]
n = 64
box_length = 8

[solver]
t_end = 1

[initial]
preset = zero

[experiment]
center = 4, 4
base = 1.5, 4, 0.5, 0.1
probe = 3.3, 3.3, 0.5, 5
R = 0.1
s = 2.5
n_list = 1, 2
)";
  const fs::path cfg = write_config(d, text);
  const Run a = sqg("nonuniform --config " + cfg.string() + " --out " + (d / "a").string(), d);
  const Run b = sqg("nonuniform --quiet --config " + cfg.string() + " --out " + (d / "b").string(), d);
  const std::string csv = slurp(d / "a" / "nonuniform.csv");
  CHECK(csv.rfind("n,r_n,input_dist,output_dist,hump_sep,ratio,status\n", 0) == 0);
  CHECK(csv == slurp(d / "b" / "nonuniform.csv"));
  CHECK(a.code == b.code);
  CHECK(a.code == 2);
  CHECK(csv.find(",ok") == std::string::npos);
  CHECK(csv.find("error:r_n = ") != std::string::npos);
  const std::string meta = slurp(d / "a" / "nonuniform_meta.txt");
  for (const char* key : {"m = ", "L_lip = ", "v_norm = ", "support_diameter_theta0 = "}) {
    CHECK(meta.find(key) != std::string::npos);
  }
}

TEST_CASE("scaling with T = 1 reports exactly zero") {
  const fs::path d = scratch("scaling");
  std::string text = small("eulerian_theta", "random_seeded");
  text += "\n[scaling]\nT = 1\n";
  const Run r = sqg("scaling --config " + write_config(d, text).string() + " --out " + (d / "out").string(), d);
  CHECK(r.code == 0);
  const auto rows = read_csv(d / "out" / "scaling.csv");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][0] == 1.0);
  CHECK(rows[0][1] == 0.0);
}

TEST_CASE("outputs stay inside the output directory") {
  const fs::path d = scratch("confine");
  const fs::path out = d / "out";
  const Run r = sqg("simulate --quiet --config " + write_config(d, small("eulerian_theta", "random_seeded")).string() +
                        " --out " + out.string(),
                    d);
  CHECK(r.code == 0);
  int outside = 0;
  for (const auto& e : fs::directory_iterator(d)) {
    const auto name = e.path().filename().string();
    if (name != "out" && name != "run.ini" && name != "log.txt") {
      ++outside;
    }
  }
  CHECK(outside == 0);
}
