#pragma once
// Run configuration: one `key = value` per line, `#` comments, blank lines
// ignored. Every key is optional; unknown and repeated keys are errors.
// Environment variables override the file: key `solver.max_iters` is read
// from VBFTRL_SOLVER_MAX_ITERS (upper case, '.' -> '_'). See
// config_schema() for the full key list with defaults.

#include "vbftrl/game.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vbftrl {

struct SweepGrid {
  std::vector<int> ds{2};
  std::vector<int> Ts{10, 50};
  std::vector<std::uint64_t> seeds{1, 2};
  std::vector<std::string> learners{"vbftrl"};
  std::vector<std::string> realities{"rank-one"};
};

struct RunConfig {
  int d = 2;
  int T = 10;
  GameConfig game;
  std::string learner = "vbftrl";
  std::string reality = "rank-one";
  int psd_rank = -1;
  std::string replay_file;  // relative paths resolve against the config file's directory
  std::string base_dir;     // directory of the config file ("" = working directory)
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  bool trace_wall_time = false;  // write measured solve_seconds instead of nan
  int workers = 0;
  SweepGrid sweep;
};

struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string help;
};

/// Every accepted key in file order of the documentation.
const std::vector<ConfigKey>& config_schema();

/// VBFTRL_* environment variables by name. Unknown VBFTRL_* names are errors
/// just like unknown file keys.
using EnvMap = std::map<std::string, std::string>;
EnvMap process_env();

/// "solver.max_iters" -> "VBFTRL_SOLVER_MAX_ITERS"
std::string env_name(const std::string& key);

/// Parses config text, applies environment overrides and validates.
/// Throws ConfigError naming the offending key (and line, when from the file).
RunConfig parse_config(const std::string& text, const EnvMap& env = process_env());
RunConfig load_config(const std::string& path, const EnvMap& env = process_env());

/// Reality strategy for the configured reality, loading the replay file if needed.
RealityStrategy make_reality(const RunConfig& config, const std::string& reality_name);

/// Canonical text form of a config (all keys, current values).
std::string dump_config(const RunConfig& config);

}  // namespace vbftrl
