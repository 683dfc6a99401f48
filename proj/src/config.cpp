#include "vbftrl/config.hpp"

#include "vbftrl/errors.hpp"
#include "vbftrl/replay.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

extern char** environ;

namespace vbftrl {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Where a value came from, for diagnostics.
struct Source {
  std::string key;
  std::string origin;  // "line 7" or "VBFTRL_D"
};

[[noreturn]] void bad_value(const Source& src, const std::string& value, const std::string& expected) {
  throw ConfigError("invalid value '" + value + "' for key '" + src.key + "' (" + src.origin + "): expected " +
                    expected);
}

long long to_integer(const Source& src, const std::string& value) {
  long long x = 0;
  const char* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, x);
  if (value.empty() || res.ec != std::errc() || res.ptr != end) bad_value(src, value, "an integer");
  return x;
}

int to_int(const Source& src, const std::string& value) {
  const long long x = to_integer(src, value);
  if (x < -(1LL << 31) || x >= (1LL << 31)) bad_value(src, value, "a 32-bit integer");
  return static_cast<int>(x);
}

std::uint64_t to_seed(const Source& src, const std::string& value) {
  std::uint64_t x = 0;
  const char* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, x);
  if (value.empty() || res.ec != std::errc() || res.ptr != end) bad_value(src, value, "a non-negative integer");
  return x;
}

double to_real(const Source& src, const std::string& value) {
  try {
    return parse_double(value);
  } catch (const std::invalid_argument&) {
    bad_value(src, value, "a number");
  }
}

bool to_bool(const Source& src, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(src, value, "true or false");
}

// "2,3" or "1..5" (inclusive), or a mix: "1..3,7".
template <class T, class Conv>
std::vector<T> to_list(const Source& src, const std::string& value, Conv conv) {
  std::vector<T> out;
  for (const auto& item : split_list(value)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(conv(src, item));
      continue;
    }
    const T lo = conv(src, trim(item.substr(0, dots)));
    const T hi = conv(src, trim(item.substr(dots + 2)));
    if (hi < lo || hi - lo > 100000) bad_value(src, item, "an increasing range lo..hi");
    for (T x = lo; x <= hi; ++x) out.push_back(x);
  }
  if (out.empty()) bad_value(src, value, "a nonempty comma-separated list");
  return out;
}

std::vector<std::string> to_names(const Source& src, const std::string& value) {
  auto out = split_list(value);
  if (out.empty()) bad_value(src, value, "a nonempty comma-separated list");
  return out;
}

void apply(RunConfig& c, const Source& src, const std::string& v) {
  const std::string& k = src.key;
  if (k == "d") {
    c.d = to_int(src, v);
  } else if (k == "T") {
    c.T = to_int(src, v);
  } else if (k == "lambda") {
    c.game.lambda = to_real(src, v);
  } else if (k == "mu") {
    c.game.mu = to_real(src, v);
  } else if (k == "learner") {
    c.learner = v;
  } else if (k == "reality") {
    c.reality = v;
  } else if (k == "psd_rank") {
    c.psd_rank = to_int(src, v);
  } else if (k == "replay_file") {
    c.replay_file = v;
  } else if (k == "seed") {
    c.seed = to_seed(src, v);
  } else if (k == "output_dir") {
    c.output_dir = v;
  } else if (k == "trace_wall_time") {
    c.trace_wall_time = to_bool(src, v);
  } else if (k == "workers") {
    c.workers = to_int(src, v);
  } else if (k == "allow_large") {
    c.game.allow_large = to_bool(src, v);
  } else if (k == "solver.max_iters") {
    c.game.solver.max_iters = to_int(src, v);
  } else if (k == "solver.eps_vol") {
    c.game.solver.eps_vol = to_real(src, v);
  } else if (k == "solver.tol_psd_cut") {
    c.game.solver.tol_psd_cut = v == "auto" ? -1.0 : to_real(src, v);
  } else if (k == "solver.value_tol") {
    c.game.solver.value_tol = to_real(src, v);
  } else if (k == "solver.radius_tol") {
    c.game.solver.radius_tol = to_real(src, v);
  } else if (k == "solver.gradient") {
    if (v == "closed-form") {
      c.game.solver.gradient = GradientMode::closed_form;
    } else if (v == "directional") {
      c.game.solver.gradient = GradientMode::directional;
    } else {
      bad_value(src, v, "closed-form or directional");
    }
  } else if (k == "sweep.d") {
    c.sweep.ds = to_list<int>(src, v, to_int);
  } else if (k == "sweep.T") {
    c.sweep.Ts = to_list<int>(src, v, to_int);
  } else if (k == "sweep.seeds") {
    c.sweep.seeds = to_list<std::uint64_t>(src, v, to_seed);
  } else if (k == "sweep.learners") {
    c.sweep.learners = to_names(src, v);
  } else if (k == "sweep.realities") {
    c.sweep.realities = to_names(src, v);
  } else {
    throw std::logic_error("config key '" + k + "' is in the schema but not handled");
  }
}

bool known_key(const std::string& key) {
  const auto& schema = config_schema();
  return std::any_of(schema.begin(), schema.end(), [&](const ConfigKey& k) { return k.name == key; });
}

[[noreturn]] void key_error(const std::string& key, const std::string& what) {
  throw ConfigError("invalid value for key '" + key + "': " + what);
}

void validate(const RunConfig& c) {
  if (c.d < 2) key_error("d", "d must be >= 2");
  if (c.T < 1) key_error("T", "T must be >= 1");
  if (!(c.game.lambda > 0.0)) key_error("lambda", "lambda must be > 0");
  if (!(c.game.mu >= 0.0)) key_error("mu", "mu must be >= 0");
  if (c.psd_rank == 0 || c.psd_rank < -1) key_error("psd_rank", "psd_rank must be >= 1 or -1 (full rank)");
  if (c.workers < 0) key_error("workers", "workers must be >= 0 (0 = all cores)");
  if (c.game.solver.max_iters < 0) key_error("solver.max_iters", "must be >= 0 (0 = automatic)");
  if (!(c.game.solver.eps_vol > 0.0 && c.game.solver.eps_vol < 1.0)) key_error("solver.eps_vol", "must be in (0, 1)");
  if (!(c.game.solver.value_tol >= 0.0)) key_error("solver.value_tol", "must be >= 0");
  if (!(c.game.solver.radius_tol >= 0.0)) key_error("solver.radius_tol", "must be >= 0");
  const auto check_name = [&](const std::string& key, const std::string& name, auto parse) {
    try {
      return parse(name);
    } catch (const ConfigError& e) {
      key_error(key, e.what());
    }
  };
  check_name("learner", c.learner, parse_learner);
  if (check_name("reality", c.reality, parse_reality) == RealityKind::replay && c.replay_file.empty()) {
    key_error("replay_file", "reality=replay needs replay_file");
  }
  for (const auto& l : c.sweep.learners) check_name("sweep.learners", l, parse_learner);
  for (const auto& r : c.sweep.realities) {
    if (check_name("sweep.realities", r, parse_reality) == RealityKind::replay && c.replay_file.empty()) {
      key_error("sweep.realities", "replay needs replay_file");
    }
  }
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"d", "2", "matrix dimension (2..4 without allow_large)"},
      {"T", "10", "number of rounds (1..200 without allow_large)"},
      {"lambda", "300", "log-determinant regularization weight"},
      {"mu", "10", "volumetric-barrier weight (vbftrl only)"},
      {"learner", "vbftrl", "vbftrl | ftrl-logdet | uniform"},
      {"reality", "rank-one", "rank-one | psd | diagonal | replay"},
      {"psd_rank", "-1", "rank of G in the psd reality (-1 = full)"},
      {"replay_file", "", "observable file for reality=replay"},
      {"seed", "1", "base seed; round t uses the counter stream (seed, t)"},
      {"output_dir", "out", "directory receiving the run/sweep artifacts"},
      {"trace_wall_time", "false", "write measured solve_seconds (otherwise nan, keeping traces byte-stable)"},
      {"workers", "0", "sweep worker threads (0 = all cores)"},
      {"allow_large", "false", "permit d > 4 or T > 200 (logs a warning)"},
      {"solver.max_iters", "0", "ellipsoid iteration cap (0 = ceil((2n+2) n ln(1/eps_vol)))"},
      {"solver.eps_vol", "1e-8", "volume target of the iteration cap"},
      {"solver.tol_psd_cut", "auto", "eigenvalue threshold for PSD cuts (auto = min(1e-9, lambda/(2(t+lambda d))))"},
      {"solver.value_tol", "1e-10", "stop once best value - certified lower bound < value_tol"},
      {"solver.radius_tol", "1e-14", "stop once sqrt(tr shape) < radius_tol"},
      {"solver.gradient", "closed-form", "closed-form | directional"},
      {"sweep.d", "2", "sweep grid: dimensions (list, ranges lo..hi allowed)"},
      {"sweep.T", "10,50", "sweep grid: horizons"},
      {"sweep.seeds", "1,2", "sweep grid: seeds"},
      {"sweep.learners", "vbftrl", "sweep grid: learners"},
      {"sweep.realities", "rank-one", "sweep grid: realities"},
  };
  return schema;
}

std::string env_name(const std::string& key) {
  std::string out = "VBFTRL_";
  for (char ch : key) out += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

EnvMap process_env() {
  EnvMap env;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    const std::string entry(*e);
    if (entry.rfind("VBFTRL_", 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    env[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  return env;
}

RunConfig parse_config(const std::string& text, const EnvMap& env) {
  RunConfig config;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string origin = "line " + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_key(key)) throw ConfigError(origin + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(origin + ": duplicate key '" + key + "'");
    apply(config, Source{key, origin}, value);
  }

  std::map<std::string, std::string> by_env_name;
  for (const auto& k : config_schema()) by_env_name[env_name(k.name)] = k.name;
  for (const auto& [name, value] : env) {
    const auto it = by_env_name.find(name);
    if (it == by_env_name.end()) throw ConfigError("unknown key in environment variable '" + name + "'");
    apply(config, Source{it->second, name}, trim(value));
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::string& path, const EnvMap& env) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  RunConfig config = parse_config(text.str(), env);
  config.base_dir = std::filesystem::path(path).parent_path().string();
  return config;
}

RealityStrategy make_reality(const RunConfig& config, const std::string& reality_name) {
  RealityStrategy s;
  s.kind = parse_reality(reality_name);
  s.psd_rank = config.psd_rank;
  if (s.kind == RealityKind::replay) {
    std::filesystem::path p(config.replay_file);
    if (p.is_relative() && !config.base_dir.empty()) p = std::filesystem::path(config.base_dir) / p;
    const ReplayFile file = read_replay_file(p.string());
    if (file.d != config.d) {
      throw ConfigError("replay file has d=" + std::to_string(file.d) + " but config has d=" +
                        std::to_string(config.d));
    }
    s.replay = file.observables;
  }
  return s;
}

std::string dump_config(const RunConfig& c) {
  const auto join = [](const auto& xs) {
    std::ostringstream out;
    for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << xs[i];
    return out.str();
  };
  std::ostringstream out;
  out << "d = " << c.d << "\n"
      << "T = " << c.T << "\n"
      << "lambda = " << format_double(c.game.lambda) << "\n"
      << "mu = " << format_double(c.game.mu) << "\n"
      << "learner = " << c.learner << "\n"
      << "reality = " << c.reality << "\n"
      << "psd_rank = " << c.psd_rank << "\n"
      << "replay_file = " << c.replay_file << "\n"
      << "seed = " << c.seed << "\n"
      << "output_dir = " << c.output_dir << "\n"
      << "trace_wall_time = " << (c.trace_wall_time ? "true" : "false") << "\n"
      << "workers = " << c.workers << "\n"
      << "allow_large = " << (c.game.allow_large ? "true" : "false") << "\n"
      << "solver.max_iters = " << c.game.solver.max_iters << "\n"
      << "solver.eps_vol = " << format_double(c.game.solver.eps_vol) << "\n"
      << "solver.tol_psd_cut = "
      << (c.game.solver.tol_psd_cut < 0 ? std::string("auto") : format_double(c.game.solver.tol_psd_cut)) << "\n"
      << "solver.value_tol = " << format_double(c.game.solver.value_tol) << "\n"
      << "solver.radius_tol = " << format_double(c.game.solver.radius_tol) << "\n"
      << "solver.gradient = "
      << (c.game.solver.gradient == GradientMode::closed_form ? "closed-form" : "directional") << "\n"
      << "sweep.d = " << join(c.sweep.ds) << "\n"
      << "sweep.T = " << join(c.sweep.Ts) << "\n"
      << "sweep.seeds = " << join(c.sweep.seeds) << "\n"
      << "sweep.learners = " << join(c.sweep.learners) << "\n"
      << "sweep.realities = " << join(c.sweep.realities) << "\n";
  return out.str();
}

}  // namespace vbftrl
