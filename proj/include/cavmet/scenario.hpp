#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cavmet/montecarlo.hpp"

namespace cavmet {

inline constexpr const char* artifact_version = "0.1.0";

enum class Scenario {
  collapse,         // P_g versus preparation time, no flip
  revival,          // P_g versus measurement time for beta = 0 and beta != 0
  fringes,          // P_g versus beta plus extracted Fisher information
  fisher_scan,      // sqrt(F) versus t2 for a set of t1 values, with bounds
  precision_curve,  // delta beta versus t1 with the sub-Planck band
  table1,           // theory summary at fixed t1 and two t2 values
  estimate,         // Cramer-Rao trial report
};

Scenario parse_scenario(const std::string& name);
std::string scenario_name(Scenario s);

/// Inclusive uniform grid; points == 1 collapses to {min}.
struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int points = 1;
};

std::vector<double> linspace(const GridSpec& grid);

struct ScenarioConfig {
  Scenario scenario = Scenario::table1;
  ProtocolParams params{};
  ImperfectionModel imperfections{};
  GridSpec t1_grid{};
  GridSpec t2_grid{};
  GridSpec beta_grid{};
  int fit_degree = 6;
  long fringe_trials = 0;  // 0 = noiseless model fringe
  double beta_true = 0.0;
  long nu = 10000;
  int replicas = 400;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  bool plot = false;
};

/// Scenario defaults: the published setup values (alpha^2 = 12.7,
/// omega0 / 2 pi = 46 kHz, w = 5.96 mm, v = 0.25 mm/us, eps = 0.05)
/// plus per-scenario grids and operating points.
ScenarioConfig default_config(Scenario s);

/// Applies one key=value setting; unknown keys or unparsable values raise
/// ConfigError. See the README for the key list.
void apply_setting(ScenarioConfig& config, const std::string& key, const std::string& value);

/// Reads a key = value file (# comments, blank lines ignored).
void load_config_file(ScenarioConfig& config, const std::string& path);

/// Runs the scenario and writes its CSV outputs plus one .meta sidecar per
/// file into config.out_dir. Returns the paths written.
std::vector<std::string> run_scenario(const ScenarioConfig& config);

/// Full command-line entry: parses arguments, runs the scenario and maps
/// failures to exit codes (0 success, 2 configuration error, 3 numerical
/// guard violation, 4 I/O or internal error).
int cli_main(int argc, const char* const* argv);

}  // namespace cavmet
