// vbftrl: play, verify and sweep the volumetric-barrier FTRL learner.
//
// Exit codes: 0 ok, 1 a verify check failed, 2 invalid input (config, CLI or
// parse error), 3 solver failure (the partial trace is still written).

#include "vbftrl/config.hpp"
#include "vbftrl/errors.hpp"
#include "vbftrl/game.hpp"
#include "vbftrl/io.hpp"
#include "vbftrl/replay.hpp"
#include "vbftrl/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

namespace fs = std::filesystem;
using namespace vbftrl;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInvalidInput = 2;
constexpr int kSolverFailed = 3;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string suite = "all";
  int instances = 0;
  std::string replay;
};

RunConfig resolve(const Options& opt) {
  RunConfig c = opt.config.empty() ? parse_config("") : load_config(opt.config);
  if (!opt.out.empty()) c.output_dir = opt.out;
  if (opt.seed) c.seed = *opt.seed;
  if (opt.workers) {
    if (*opt.workers < 0) throw ConfigError("--workers must be >= 0");
    c.workers = *opt.workers;
  }
  return c;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

int cmd_run(const Options& opt) {
  const RunConfig c = resolve(opt);
  const std::string warning = validate_game(c.d, c.T, c.game);
  if (!warning.empty()) std::cerr << warning << "\n";
  const LearnerKind learner = parse_learner(c.learner);
  const RealityStrategy reality = make_reality(c, c.reality);
  std::cerr << "vbftrl run: d=" << c.d << " T=" << c.T << " lambda=" << format_double(c.game.lambda)
            << " mu=" << format_double(c.game.mu) << " learner=" << c.learner << " reality=" << c.reality
            << " seed=" << c.seed << "\n";

  const GameTrace trace = play_game(learner, reality, c.T, c.d, c.game, c.seed);

  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  std::ostringstream csv;
  write_trace_csv(csv, trace_rows(trace, c.trace_wall_time));
  write_file(dir / "trace.csv", csv.str());
  if (!trace.aborted) {
    std::ostringstream rho;
    write_density(rho, trace.rho_next, "rho_{T+1}: the learner's state after the last round");
    write_file(dir / "rho_final.txt", rho.str());
  }
  write_file(dir / "summary.json", summary_json(trace, c, warning));
  write_file(dir / "config.txt", dump_config(c));

  if (trace.aborted) {
    std::cerr << "solver failure after " << trace.rounds.size() << " rounds: " << trace.error << "\n";
    return kSolverFailed;
  }
  std::printf("regret %s  hindsight %s  violations %d\n", format_double(trace.regret).c_str(),
              format_double(trace.hindsight_value).c_str(), trace.violations.total());
  return kOk;
}

int cmd_verify(const Options& opt) {
  VerifyOptions v;
  v.seed = opt.seed.value_or(1);
  v.instances = opt.instances;
  const VerifyReport report = run_verify(opt.suite, v);
  print_report(std::cout, report);
  if (!opt.out.empty()) {
    fs::create_directories(opt.out);
    std::ostringstream text;
    print_report(text, report);
    write_file(fs::path(opt.out) / "verify_report.txt", text.str());
  }
  return report.ok() ? kOk : kVerifyFailed;
}

int cmd_sweep(const Options& opt) {
  const RunConfig c = resolve(opt);
  SweepSpec spec;
  spec.ds = c.sweep.ds;
  spec.Ts = c.sweep.Ts;
  spec.seeds = c.sweep.seeds;
  spec.learners.clear();
  for (const auto& l : c.sweep.learners) spec.learners.push_back(parse_learner(l));
  spec.realities.clear();
  for (const auto& r : c.sweep.realities) spec.realities.push_back(make_reality(c, r));
  for (int d : spec.ds)
    for (int T : spec.Ts) {
      const std::string warning = validate_game(d, T, c.game);
      if (!warning.empty()) std::cerr << warning << "\n";
    }
  const int workers = c.workers > 0 ? c.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::cerr << "vbftrl sweep: lambda=" << format_double(c.game.lambda) << " mu=" << format_double(c.game.mu)
            << " workers=" << workers << "\n";

  const SweepResult result = regret_sweep(spec, c.game, workers);

  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  std::ostringstream csv;
  write_sweep_csv(csv, result.rows);
  write_file(dir / "sweep.csv", csv.str());

  bool aborted = false;
  for (const auto& row : result.rows) aborted |= row.aborted;
  for (const auto& cell : result.cells) {
    std::printf("d=%d T=%d %s/%s mean_regret=%s max_constant=%s\n", cell.d, cell.T, cell.learner.c_str(),
                cell.reality.c_str(), format_double(cell.mean_regret).c_str(),
                format_double(cell.max_constant).c_str());
  }
  if (aborted) {
    std::cerr << "solver failure in at least one game (aborted=1 rows in sweep.csv)\n";
    return kSolverFailed;
  }
  return kOk;
}

int cmd_hindsight(const Options& opt) {
  const ReplayFile file = read_replay_file(opt.replay);
  if (file.observables.empty()) throw ParseError("replay file holds no observables", 0);
  SolverConfig solver;
  if (!opt.config.empty()) solver = load_config(opt.config).game.solver;
  const SolveResult r = hindsight_optimum(file.observables, file.d, solver);
  std::printf("d=%d observables=%zu\n", file.d, file.observables.size());
  std::printf("value %s\n", format_double(r.value).c_str());
  std::printf("certified_gap %s\n", format_double(r.value - r.lower_bound).c_str());
  std::printf("rho\n");
  for (int i = 0; i < file.d; ++i) {
    for (int j = 0; j < file.d; ++j) {
      const Complex z = r.rho.mat()(i, j);
      std::printf("%s%s:%s", j ? " " : "", format_double(z.real()).c_str(), format_double(z.imag()).c_str());
    }
    std::printf("\n");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volumetric-barrier FTRL for online learning of quantum states"};
  app.require_subcommand(1);
  Options opt;

  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { opt.seed = s; },
                                            "Override the seed");
  };

  CLI::App* run = app.add_subcommand("run", "Play one game and write trace.csv, rho_final.txt, summary.json");
  run->add_option("--config", opt.config, "key = value config file")->check(CLI::ExistingFile);
  run->add_option("--out", opt.out, "Output directory (overrides output_dir)");
  add_seed(run);

  CLI::App* verify = app.add_subcommand("verify", "Run the property suites");
  verify->add_option("--suite", opt.suite, "kron | derivs | vbc | sc | sandwich | ineqs | ellipsoid | all");
  verify->add_option("--instances", opt.instances, "Instances per configuration (0 = suite default)");
  verify->add_option("--out", opt.out, "Also write verify_report.txt here");
  add_seed(verify);

  CLI::App* sweep = app.add_subcommand("sweep", "Regret sweep over the config's sweep.* grid; writes sweep.csv");
  sweep->add_option("--config", opt.config, "key = value config file")->check(CLI::ExistingFile);
  sweep->add_option("--out", opt.out, "Output directory (overrides output_dir)");
  sweep->add_option_function<int>("--workers", [&](const int& w) { opt.workers = w; },
                                  "Worker threads (default: all cores)");

  CLI::App* hindsight = app.add_subcommand("hindsight", "Best fixed density matrix for a replay file");
  hindsight->add_option("replay", opt.replay, "Replay file")->required();
  hindsight->add_option("--config", opt.config, "Config file for solver.* settings")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidInput;
  }

  try {
    if (*run) return cmd_run(opt);
    if (*verify) return cmd_verify(opt);
    if (*sweep) return cmd_sweep(opt);
    if (*hindsight) return cmd_hindsight(opt);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}
