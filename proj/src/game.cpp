#include "vbftrl/game.hpp"

#include "vbftrl/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace vbftrl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::vbftrl:
      return "vbftrl";
    case LearnerKind::ftrl_logdet:
      return "ftrl-logdet";
    case LearnerKind::uniform:
      return "uniform";
  }
  return "unknown";
}

std::string to_string(RealityKind kind) {
  switch (kind) {
    case RealityKind::rank_one:
      return "rank-one";
    case RealityKind::psd:
      return "psd";
    case RealityKind::diagonal:
      return "diagonal";
    case RealityKind::replay:
      return "replay";
  }
  return "unknown";
}

LearnerKind parse_learner(const std::string& name) {
  if (name == "vbftrl") return LearnerKind::vbftrl;
  if (name == "ftrl-logdet") return LearnerKind::ftrl_logdet;
  if (name == "uniform") return LearnerKind::uniform;
  throw ConfigError("unknown learner '" + name + "' (expected vbftrl, ftrl-logdet or uniform)");
}

RealityKind parse_reality(const std::string& name) {
  if (name == "rank-one") return RealityKind::rank_one;
  if (name == "psd") return RealityKind::psd;
  if (name == "diagonal") return RealityKind::diagonal;
  if (name == "replay") return RealityKind::replay;
  throw ConfigError("unknown reality '" + name + "' (expected rank-one, psd, diagonal or replay)");
}

CounterRng round_rng(std::uint64_t seed, int t) { return CounterRng(seed, static_cast<std::uint64_t>(t)); }

Observable gen_observable(const RealityStrategy& strategy, int d, int t, CounterRng& rng) {
  switch (strategy.kind) {
    case RealityKind::rank_one:
      return Observable(HermitianMatrix::outer(random_unit_vector(d, rng)));
    case RealityKind::psd: {
      const HermitianMatrix g = random_psd(d, rng, strategy.psd_rank);
      return Observable(g * (1.0 / g.trace()));
    }
    case RealityKind::diagonal: {
      std::vector<double> diag(static_cast<std::size_t>(d));
      for (auto& x : diag) x = rng.uniform_pos();
      return Observable(HermitianMatrix::diagonal(diag));
    }
    case RealityKind::replay: {
      if (t < 1 || t > static_cast<int>(strategy.replay.size())) {
        throw ConfigError("replay holds " + std::to_string(strategy.replay.size()) + " observables, round " +
                          std::to_string(t) + " requested");
      }
      const Observable& a = strategy.replay[static_cast<std::size_t>(t - 1)];
      if (a.dim() != d) throw ConfigError("replay observable dimension does not match d");
      return a;
    }
  }
  throw std::logic_error("gen_observable: unhandled reality kind");
}

SolveResult vbftrl_next(const std::vector<Observable>& history, int d, double lambda, double mu,
                        const SolverConfig& solver) {
  return minimize_potential(PotentialOracle(d, history, lambda, mu), solver);
}

SolveResult ftrl_logdet_next(const std::vector<Observable>& history, int d, double lambda,
                             const SolverConfig& solver) {
  return vbftrl_next(history, d, lambda, 0.0, solver);
}

DensityMatrix uniform_next(int d) {
  if (d < 1) throw std::invalid_argument("uniform_next: d must be >= 1");
  return DensityMatrix::maximally_mixed(d);
}

std::string validate_game(int d, int T, const GameConfig& config) {
  if (d < 2) throw ConfigError("d must be >= 2");
  if (T < 1) throw ConfigError("T must be >= 1");
  if (!(config.lambda > 0.0)) throw ConfigError("lambda must be > 0");
  if (!(config.mu >= 0.0)) throw ConfigError("mu must be >= 0");
  if (d > 4 || T > 200) {
    const std::string what = "d=" + std::to_string(d) + ", T=" + std::to_string(T) +
                             " is outside the desk-scale envelope (d <= 4, T <= 200)";
    if (!config.allow_large) throw ConfigError(what + "; set allow_large=true to run it anyway");
    return "warning: " + what + "; running because allow_large=true";
  }
  return {};
}

namespace {

struct Timed {
  SolveResult result;
  double seconds = 0.0;
};

// Stand-in result for the uniform learner, which does not solve anything.
SolveResult uniform_result(int d) {
  SolveResult r;
  r.rho = uniform_next(d);
  r.value = kNaN;
  r.lower_bound = kNaN;
  r.stop_reason = "uniform";
  return r;
}

}  // namespace

GameTrace play_game(LearnerKind learner, const RealityStrategy& reality, int T, int d, const GameConfig& config,
                    std::uint64_t seed) {
  validate_game(d, T, config);
  if (reality.kind == RealityKind::replay && static_cast<int>(reality.replay.size()) < T) {
    throw ConfigError("replay holds " + std::to_string(reality.replay.size()) + " observables but T=" +
                      std::to_string(T));
  }
  const bool ftrl = learner != LearnerKind::uniform;
  const double mu = learner == LearnerKind::vbftrl ? config.mu : 0.0;

  GameTrace trace;
  trace.d = d;
  trace.T = T;
  trace.lambda = config.lambda;
  trace.mu = mu;
  trace.seed = seed;
  trace.learner = to_string(learner);
  trace.reality = to_string(reality.kind);
  trace.min_potential = kNaN;
  trace.initial_potential = kNaN;
  trace.bias = kNaN;

  std::vector<Observable> history;
  const auto solve = [&]() {
    Timed out;
    const auto t0 = std::chrono::steady_clock::now();
    out.result = ftrl ? vbftrl_next(history, d, config.lambda, mu, config.solver) : uniform_result(d);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  };

  const double pi_cap = 1.0 / (config.lambda + 1.0) + 1e-6;
  const double value_tol = config.solver.value_tol;

  try {
    Timed current = solve();
    if (ftrl) trace.initial_potential = current.result.value;
    for (int t = 1; t <= T; ++t) {
      // Physicist has fixed rho_t; only now does Reality draw A_t.
      const DensityMatrix rho = current.result.rho;
      CounterRng rng = round_rng(seed, t);
      const Observable a = gen_observable(reality, d, t, rng);

      RoundRecord rec;
      rec.t = t;
      rec.rho = rho;
      rec.observable = a;
      rec.loss = loss_eval(a, rho);
      rec.solve_iters = current.result.iters;
      rec.solve_seconds = current.seconds;
      rec.solve_gap = ftrl ? current.result.value - current.result.lower_bound : kNaN;

      const PotentialOracle before(d, history, config.lambda, mu);
      history.push_back(a);
      const PotentialOracle after(d, history, config.lambda, mu);
      const LocalModel model = after.at(rho);
      rec.pi = model.pi();
      rec.gain = mu * (before.at(rho).vb() - model.vb());

      Timed next = solve();
      rec.miss = ftrl ? model.potential() - after.at(next.result.rho).potential() : kNaN;

      if (rec.pi > pi_cap) ++trace.violations.pi_bound;
      const double gain_ref = 0.5 * mu * std::log1p(-rec.pi);
      if (std::abs(rec.gain - gain_ref) > 1e-6 * std::max({std::abs(gain_ref), std::abs(rec.gain), 1e-300}) &&
          std::abs(rec.gain - gain_ref) > 1e-15) {
        ++trace.violations.gain_identity;
      }
      // the Miss bounds come from the volumetric-barrier analysis and need mu > 0
      if (learner == LearnerKind::vbftrl) {
        if (rec.miss > 0.5 * mu * rec.pi + 2.0 * value_tol) ++trace.violations.miss_bound;
        if (rec.gain + rec.miss > 1e-6) ++trace.violations.gain_plus_miss;
      }

      trace.cum_loss += rec.loss;
      trace.rounds.push_back(std::move(rec));
      current = std::move(next);
    }
    trace.rho_next = current.result.rho;
    if (ftrl) trace.min_potential = current.result.value;

    const SolveResult hindsight = hindsight_optimum(history, d, config.solver);
    trace.hindsight_value = hindsight.value;
    trace.regularized_value = minimize_potential(PotentialOracle(d, history, config.lambda, 0.0), config.solver).value;
    trace.regret = trace.cum_loss - trace.hindsight_value;
    if (ftrl) trace.bias = trace.min_potential - trace.hindsight_value;
  } catch (const SolverError& e) {
    trace.aborted = true;
    trace.error = e.what();
  } catch (const DomainError& e) {
    trace.aborted = true;
    trace.error = e.what();
  }
  return trace;
}

SweepResult regret_sweep(const SweepSpec& spec, const GameConfig& config, int workers) {
  if (spec.ds.empty() || spec.Ts.empty() || spec.learners.empty() || spec.realities.empty()) {
    throw ConfigError("regret_sweep: d, T, learner and reality lists must be nonempty");
  }
  if (spec.seeds.empty()) throw ConfigError("regret_sweep: seed list must be nonempty");
  for (int d : spec.ds)
    for (int T : spec.Ts) validate_game(d, T, config);

  struct Task {
    int d;
    int T;
    const RealityStrategy* reality;
    LearnerKind learner;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (int d : spec.ds)
    for (int T : spec.Ts)
      for (const auto& r : spec.realities)
        for (LearnerKind l : spec.learners)
          for (std::uint64_t s : spec.seeds) tasks.push_back({d, T, &r, l, s});

  SweepResult out;
  out.rows.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  const auto work = [&]() {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
      const Task& task = tasks[i];
      const auto t0 = std::chrono::steady_clock::now();
      const GameTrace g = play_game(task.learner, *task.reality, task.T, task.d, config, task.seed);
      SweepRow& row = out.rows[i];
      row.d = task.d;
      row.T = task.T;
      row.seed = task.seed;
      row.learner = g.learner;
      row.reality = g.reality;
      row.regret = g.aborted ? kNaN : g.regret;
      row.fitted_constant = row.regret / (task.d * task.d * std::log(task.d + task.T));
      row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      for (const auto& rec : g.rounds) row.total_iters += rec.solve_iters;
      row.violations = g.violations.total();
      row.aborted = g.aborted;
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  int n_workers = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n_workers = std::min<int>(n_workers, static_cast<int>(tasks.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  for (std::size_t i = 0; i < out.rows.size();) {
    const SweepRow& head = out.rows[i];
    SweepCell cell{head.d, head.T, head.learner, head.reality, 0.0, -std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()};
    const std::size_t n = spec.seeds.size();
    for (std::size_t k = i; k < i + n; ++k) {
      cell.mean_regret += out.rows[k].regret / static_cast<double>(n);
      cell.max_regret = std::max(cell.max_regret, out.rows[k].regret);
      cell.max_constant = std::max(cell.max_constant, out.rows[k].fitted_constant);
    }
    out.max_constant = i == 0 ? cell.max_constant : std::max(out.max_constant, cell.max_constant);
    out.cells.push_back(cell);
    i += n;
  }
  return out;
}

}  // namespace vbftrl
