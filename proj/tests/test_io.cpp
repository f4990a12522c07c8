// Configuration parsing, SQGF1 snapshots and the counter-based RNG.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracle.hpp"
#include "sqg/config.hpp"
#include "sqg/errors.hpp"
#include "sqg/random_fields.hpp"
#include "sqg/snapshot.hpp"

using namespace sqg;

namespace {

const char* kFull = R"(# every section
[grid]
n = 64
box_length = 32

[solver]
dt = 0.001
t_end = 0.75
cfl_safety = 0.25
dealias = false
filter = true
diag_stride = 3

[run]
formulation = lagrangian
rng_seed = 18446744073709551615

[initial]
preset = bump_sum
amplitude = 0.1
kmax = 3
slope = 1.5
bumps = 1, 2, 0.5, 1; 3.25, 4, 0.75, -0.5

[experiment]
center = 16, 16
base = 10, 16, 1.5, 1
probe = 15, 15, 0.5, 1
R = 0.1
s = 2.5
n_list = 1, 2, 4

[output]
directory = results/run one
snapshot_stride = 10
snapshots = false

[scaling]
T = 0.25
)";

// Expects parse_config to fail with a message containing every fragment.
void expect_error(const std::string& text, std::initializer_list<const char*> fragments) {
  try {
    parse_config(text);
    FAIL("expected ConfigError for:\n" << text);
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const char* f : fragments) {
      CHECK_MESSAGE(msg.find(f) != std::string::npos, msg);
    }
  }
}

}  // namespace

TEST_CASE("empty config gives the defaults") {
  const RunConfig c = parse_config("");
  CHECK(c == RunConfig{});
  CHECK(c.grid.n == 128);
  CHECK_FALSE(c.experiment.has_value());
}

TEST_CASE("full config parses every field") {
  const RunConfig c = parse_config(kFull);
  CHECK(c.grid.n == 64);
  CHECK(c.grid.box_length == 32.0);
  CHECK(c.solver.dt == 0.001);
  CHECK_FALSE(c.solver.dealias);
  CHECK(c.solver.filter);
  CHECK(c.solver.diag_stride == 3);
  CHECK(c.formulation == Formulation::lagrangian);
  CHECK(c.rng_seed == 18446744073709551615ull);
  CHECK(c.initial.preset == Preset::bump_sum);
  REQUIRE(c.initial.bumps.size() == 2);
  CHECK(c.initial.bumps[1] == BumpParams{3.25, 4.0, 0.75, -0.5});
  REQUIRE(c.experiment.has_value());
  CHECK(c.experiment->center_x1 == 16.0);
  CHECK(c.experiment->n_list == std::vector<int>{1, 2, 4});
  CHECK(c.output.directory == "results/run one");
  CHECK_FALSE(c.output.snapshots);
  CHECK(c.scaling.T == 0.25);
  const TimeStepConfig t = c.time_step();
  CHECK(t.dt == 0.001);
  CHECK(t.snapshot_stride == 10);
  CHECK_FALSE(t.dealias);
}

TEST_CASE("parse, serialize, parse is the identity") {
  for (const char* text : {"", kFull}) {
    const RunConfig a = parse_config(text);
    const std::string s = serialize_config(a);
    const RunConfig b = parse_config(s);
    CHECK(a == b);
    CHECK(serialize_config(b) == s);
  }
  RunConfig odd;
  odd.grid.box_length = 0.1 + 0.2;  // not representable in short decimal
  odd.solver.t_end = 1.0 / 3.0;
  CHECK(parse_config(serialize_config(odd)) == odd);
}

TEST_CASE("errors name the line and the field") {
  expect_error("[grid]\nn = 15\n", {"line 2", "grid.n", "even"});
  expect_error("[grid]\n\nn = abc\n", {"line 3", "grid.n"});
  expect_error("[solver]\nt_end = -1\n", {"line 2", "solver.t_end"});
  expect_error("[solver]\ncfl_safety = 2\n", {"line 2", "solver.cfl_safety"});
  expect_error("[solver]\ndealias = maybe\n", {"line 2", "solver.dealias"});
  expect_error("[run]\nformulation = spectral\n", {"line 2", "run.formulation"});
  expect_error("[run]\nrng_seed = -4\n", {"line 2", "run.rng_seed"});
  expect_error("[initial]\nkmax = 50\n", {"line 2", "initial.kmax"});
  expect_error("[initial]\npreset = bump_sum\n", {"initial.bumps"});
  expect_error("[initial]\nbumps = 1, 2, 3\n", {"line 2", "initial.bumps"});
  expect_error("[experiment]\nprobe = 1, 1, 1, 1\n", {"experiment.center"});
  expect_error("[experiment]\ncenter = 4, 4\nprobe = 1, 1, 1, 1\nn_list = 2, 1\n", {"line 4", "experiment.n_list"});
  expect_error("[grid]\nsize = 4\n", {"line 2", "grid.size"});
  expect_error("[mesh]\nn = 4\n", {"line 1", "[mesh]"});
  expect_error("[grid]\nn = 16\nn = 32\n", {"line 3", "duplicate"});
  expect_error("n = 16\n", {"line 1", "outside"});
  expect_error("[grid\n", {"line 1"});
  expect_error("[grid]\njust words\n", {"line 2", "key = value"});
}

TEST_CASE("config errors carry the line number") {
  try {
    parse_config("[grid]\n# comment\nn = 7\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("initial presets") {
  RunConfig c;
  c.grid.n = 32;
  const GridPtr g = make_grid(32, c.grid.box_length);
  c.initial.preset = Preset::zero;
  CHECK(grid_max_abs(initial_theta(c, g)) == 0.0);
  c.initial.preset = Preset::shear;
  c.initial.amplitude = 2.0;
  CHECK(linf_norm(initial_theta(c, g)) == doctest::Approx(2.0));
  c.initial.preset = Preset::random_seeded;
  c.initial.amplitude = 1.0;
  CHECK(l2_norm(initial_theta(c, g)) == doctest::Approx(1.0));
  c.initial.preset = Preset::bump_sum;
  c.initial.bumps = {{3.0, 3.0, 1.0, 0.5}};
  CHECK(grid_max_abs(initial_theta(c, g)) > 0.0);
}

TEST_CASE("SQGF1 round trip is bit exact") {
  const auto path = std::filesystem::temp_directory_path() / "sqg_test_snap.sqgf";
  const GridPtr g = make_grid(16, 0.1 + 0.2);
  const ScalarField a = random_band_limited(g, 1, {4, 2.0, 1.0});
  const VectorField2 u(random_band_limited(g, 2, {4, 2.0, 1.0}), random_band_limited(g, 3, {4, 2.0, 1.0}));
  write_snapshot(path, {{"theta", a}, {"DISP:x", u.x()}, {"DISP:y", u.y()}});
  const auto recs = read_snapshot(path);
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].name == "theta");
  CHECK(recs[0].field.grid().n() == 16);
  CHECK(recs[0].field.grid().box_length() == 0.1 + 0.2);
  CHECK(std::memcmp(recs[0].field.data(), a.data(), a.size() * sizeof(double)) == 0);
  const VectorField2 back = find_vector(recs, "DISP");
  CHECK(std::memcmp(back.y().data(), u.y().data(), a.size() * sizeof(double)) == 0);
  CHECK(&recs[1].field.grid() == &recs[0].field.grid());
  CHECK_THROWS_AS(find_vector(recs, "v"), Error);
  std::filesystem::remove(path);
}

TEST_CASE("SQGF1 byte layout") {
  const GridPtr g = make_grid(16, 2.0);
  std::ostringstream os;
  write_record(os, "ab", ScalarField::constant(g, 1.0));
  const std::string bytes = os.str();
  REQUIRE(bytes.size() == 5 + 4 + 8 + 4 + 2 + 16 * 16 * 8);
  CHECK(bytes.substr(0, 5) == "SQGF1");
  CHECK(static_cast<unsigned char>(bytes[5]) == 16);
  CHECK(bytes[6] == 0);
  double L = 0.0;
  std::memcpy(&L, bytes.data() + 9, 8);
  CHECK(L == 2.0);
  CHECK(static_cast<unsigned char>(bytes[17]) == 2);
  CHECK(bytes.substr(21, 2) == "ab");
}

TEST_CASE("SQGF1 rejects bad magic and truncation") {
  std::istringstream bad("SQGF2 and more");
  CHECK_THROWS_AS(read_records(bad), Error);
  const GridPtr g = make_grid(16, 2.0);
  std::ostringstream os;
  write_record(os, "x", ScalarField::constant(g, 1.0));
  std::string cut = os.str();
  cut.resize(cut.size() - 3);
  std::istringstream is(cut);
  CHECK_THROWS_AS(read_records(is), Error);
  std::istringstream empty("");
  CHECK(read_records(empty).empty());
}

TEST_CASE("counter RNG reference values") {
  CHECK(CounterRng::at(0, 0) == 0xE220A8397B1DCDAFull);
  CHECK(CounterRng::at(0, 1) == 0x6E789E6AA1B965F4ull);
  CHECK(CounterRng::at(0, 2) == 0x06C45D188009454Full);
  CounterRng r(0);
  CHECK(r.next_u64() == 0xE220A8397B1DCDAFull);
  CHECK(r.counter() == 1);
  // a stream can be resumed from its counter alone
  CounterRng a(42);
  a.next_u64();
  a.next_u64();
  CounterRng b(42, 2);
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform and normal draws") {
  CounterRng r(9);
  double sum = 0.0;
  double sum2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    const double z = r.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sum2 / n - 1.0) < 0.05);
}

TEST_CASE("random band-limited fields are deterministic, normalized and in band") {
  const GridPtr g = make_grid(32, 5.0);
  const ScalarField a = random_band_limited(g, 7, {4, 2.0, 2.5});
  const ScalarField b = random_band_limited(g, 7, {4, 2.0, 2.5});
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
  CHECK(l2_norm(a) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(std::abs(mean(a)) < 1e-15);
  const SpectralField c = to_spectral(a);
  for (int j = 0; j < 32; ++j) {
    for (int i = 0; i < g->half(); ++i) {
      if (i > 4 || std::abs(g->mode2(j)) > 4) {
        CHECK(std::abs(c.at(j, i)) < 1e-15);
      }
    }
  }
  CHECK(oracle::max_abs_diff(random_band_limited(g, 8, {4, 2.0, 2.5}), a) > 0.1);
  CHECK_THROWS_AS(random_band_limited(make_grid(16, 1.0), 1, {6, 2.0, 1.0}), InvalidArgument);
}

TEST_CASE("band_project keeps band content and drops the mean") {
  const GridPtr g = make_grid(24, 2 * 3.141592653589793);
  const ScalarField f = ScalarField::from_function(
      g, [](double x1, double x2) { return 1.0 + std::sin(x1) + std::cos(10 * x2); });
  const ScalarField expect = ScalarField::from_function(g, [](double x1, double) { return std::sin(x1); });
  CHECK(oracle::max_abs_diff(band_project(f), expect) < 1e-14);
}
