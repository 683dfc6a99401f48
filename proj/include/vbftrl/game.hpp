#pragma once
// The T-round game between a Physicist (the learner, announcing density
// matrices) and Reality (announcing PSD observables), with the per-round
// regret-decomposition certificates of VB-FTRL.

#include "vbftrl/ellipsoid.hpp"
#include "vbftrl/potential.hpp"
#include "vbftrl/random.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vbftrl {

inline constexpr double kDefaultLambda = 300.0;
inline constexpr double kDefaultMu = 10.0;

enum class LearnerKind { vbftrl, ftrl_logdet, uniform };
enum class RealityKind { rank_one, psd, diagonal, replay };

std::string to_string(LearnerKind kind);
std::string to_string(RealityKind kind);
/// Throws ConfigError on an unknown name.
LearnerKind parse_learner(const std::string& name);
RealityKind parse_reality(const std::string& name);

struct RealityStrategy {
  RealityKind kind = RealityKind::rank_one;
  int psd_rank = -1;                // psd: rank of G in G G^*, -1 for full rank
  std::vector<Observable> replay;   // replay: observables in round order
};

/// Observable for round t (1-based). Only t and the round's generator are
/// visible, so Reality cannot react to the learner's rho_t.
///   rank-one: v v^* with v a complex Gaussian vector normalized to unit norm
///   psd:      G G^* / tr(G G^*) with G a complex Gaussian d x psd_rank matrix
///   diagonal: diag(u_1..u_d), u_i uniform on (0, 1]
///   replay:   replay[t - 1]
Observable gen_observable(const RealityStrategy& strategy, int d, int t, CounterRng& rng);

/// Round t's generator: CounterRng(seed, t).
CounterRng round_rng(std::uint64_t seed, int t);

struct GameConfig {
  double lambda = kDefaultLambda;
  double mu = kDefaultMu;
  SolverConfig solver;
  bool allow_large = false;  // permit d > 4 or T > 200
};

/// Learners. Each returns the full solve result so iteration counts and
/// certified gaps can be reported.
SolveResult vbftrl_next(const std::vector<Observable>& history, int d, double lambda, double mu,
                        const SolverConfig& solver = {});
SolveResult ftrl_logdet_next(const std::vector<Observable>& history, int d, double lambda,
                             const SolverConfig& solver = {});
DensityMatrix uniform_next(int d);

struct RoundRecord {
  int t = 0;
  DensityMatrix rho = DensityMatrix::maximally_mixed(1);
  Observable observable{HermitianMatrix::identity(1)};
  double loss = 0.0;
  double pi = 0.0;
  double gain = 0.0;
  double miss = 0.0;          // NaN for the uniform learner
  int solve_iters = 0;        // iterations of the solve that produced rho_t
  double solve_seconds = 0.0;
  double solve_gap = 0.0;     // certified suboptimality of rho_t in P_{t-1}
};

/// Certificate violations. pi_bound and gain_identity hold for every learner;
/// miss_bound and gain_plus_miss are VB-FTRL certificates (mu > 0) and are
/// only counted for that learner.
struct CertificateCounts {
  int pi_bound = 0;   // pi_t > 1/(lambda+1) + 1e-6
  int gain_identity = 0;  // |Gain_t - (mu/2) log(1 - pi_t)| > 1e-6 relative
  int miss_bound = 0;     // Miss_t > (mu/2) pi_t + 2 value_tol
  int gain_plus_miss = 0;  // Gain_t + Miss_t > 1e-6
  int total() const { return pi_bound + gain_identity + miss_bound + gain_plus_miss; }
};

struct GameTrace {
  int d = 0;
  int T = 0;
  double lambda = 0.0;
  double mu = 0.0;
  std::uint64_t seed = 0;
  std::string learner;
  std::string reality;
  std::vector<RoundRecord> rounds;
  DensityMatrix rho_next = DensityMatrix::maximally_mixed(1);  // rho_{T+1} from the terminal solve
  double cum_loss = 0.0;
  double hindsight_value = 0.0;      // min sum f_t (the regret comparator)
  double regularized_value = 0.0;    // min L_T = min sum f_t + lambda R
  double min_potential = 0.0;        // min P_T (terminal solve), NaN for uniform
  double initial_potential = 0.0;    // P_0(rho_1), NaN for uniform
  double bias = 0.0;                 // min P_T - min sum f_t
  double regret = 0.0;
  CertificateCounts violations;
  bool aborted = false;  // a solver failure stopped the game; rounds holds the completed prefix
  std::string error;
};

/// Plays T rounds. Solver failures do not throw: the trace comes back with
/// aborted = true and the rounds completed so far.
GameTrace play_game(LearnerKind learner, const RealityStrategy& reality, int T, int d, const GameConfig& config,
                    std::uint64_t seed);

/// Throws ConfigError on d < 2, T < 1, lambda <= 0, mu < 0, or the desk-scale
/// envelope (d <= 4, T <= 200) exceeded without allow_large. Returns a warning
/// message (possibly empty) when allow_large lets an oversized game through.
std::string validate_game(int d, int T, const GameConfig& config);

struct SweepRow {
  int d = 0;
  int T = 0;
  std::uint64_t seed = 0;
  std::string learner;
  std::string reality;
  double regret = 0.0;
  double fitted_constant = 0.0;  // regret / (d^2 log(d + T))
  double wall_seconds = 0.0;
  long total_iters = 0;
  int violations = 0;
  bool aborted = false;
};

struct SweepCell {
  int d = 0;
  int T = 0;
  std::string learner;
  std::string reality;
  double mean_regret = 0.0;
  double max_regret = 0.0;
  double max_constant = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by (d, T, reality, learner, seed)
  std::vector<SweepCell> cells;
  double max_constant = 0.0;
};

struct SweepSpec {
  std::vector<int> ds;
  std::vector<int> Ts;
  std::vector<LearnerKind> learners{LearnerKind::vbftrl};
  std::vector<RealityStrategy> realities{RealityStrategy{}};
  std::vector<std::uint64_t> seeds;
};

/// Runs every (d, T, reality, learner, seed) game on `workers` threads
/// (0 = hardware concurrency). Row order does not depend on scheduling.
SweepResult regret_sweep(const SweepSpec& spec, const GameConfig& config, int workers = 0);

}  // namespace vbftrl
