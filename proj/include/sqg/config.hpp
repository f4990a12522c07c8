#pragma once

// Run configuration: INI-style text.
//
//   # comment
//   [section]
//   key = value
//
// Every key belongs to a section; unknown sections or keys, duplicates and
// out-of-range values raise ConfigError naming the line and "section.key".

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sqg/eulerian.hpp"
#include "sqg/field.hpp"
#include "sqg/nonuniform.hpp"

namespace sqg {

struct BumpParams {
  double x1 = 0.0;
  double x2 = 0.0;
  double radius = 1.0;
  double amplitude = 1.0;
  bool operator==(const BumpParams&) const = default;
};

enum class Formulation { eulerian_theta, eulerian_u, lagrangian };
enum class Preset { zero, shear, random_seeded, bump_sum };

struct GridConfig {
  int n = 128;
  double box_length = 6.283185307179586;
  bool operator==(const GridConfig&) const = default;
};

struct SolverConfig {
  double dt = 0.0;  // 0 = from CFL
  double t_end = 0.25;
  double cfl_safety = 0.5;
  bool dealias = true;
  bool filter = false;
  int diag_stride = 1;
  bool operator==(const SolverConfig&) const = default;
};

struct InitialConfig {
  Preset preset = Preset::random_seeded;
  double amplitude = 1.0;  // shear amplitude, or L2 norm of the random field
  int kmax = 4;
  double slope = 2.0;
  std::vector<BumpParams> bumps;
  bool operator==(const InitialConfig&) const = default;
};

struct ExperimentConfig {
  double center_x1 = 0.0;
  double center_x2 = 0.0;
  std::vector<BumpParams> base;
  std::vector<BumpParams> probe;
  double R = 0.1;
  double s = 2.5;
  std::vector<int> n_list{1, 2, 4, 8};
  bool operator==(const ExperimentConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  int snapshot_stride = 0;
  bool snapshots = true;
  bool operator==(const OutputConfig&) const = default;
};

struct ScalingConfig {
  double T = 0.5;
  bool operator==(const ScalingConfig&) const = default;
};

struct RunConfig {
  GridConfig grid;
  SolverConfig solver;
  Formulation formulation = Formulation::eulerian_theta;
  std::uint64_t rng_seed = 1;
  InitialConfig initial;
  std::optional<ExperimentConfig> experiment;
  OutputConfig output;
  ScalingConfig scaling;
  bool operator==(const RunConfig&) const = default;

  TimeStepConfig time_step() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& cfg);

const char* to_string(Formulation f);
const char* to_string(Preset p);

// Initial theta described by the [initial] section (the raw field; callers
// that need band-limited data project it).
ScalarField initial_theta(const RunConfig& cfg, GridPtr grid);
ScalarField bump_sum(const std::vector<BumpParams>& bumps, GridPtr grid);

// HumpSpec on the configured grid. Throws ConfigError without an
// [experiment] section or when the geometry is invalid.
HumpSpec make_hump_spec(const RunConfig& cfg);

}  // namespace sqg
