#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vbftrl/config.hpp"
#include "vbftrl/ellipsoid.hpp"
#include "vbftrl/errors.hpp"
#include "vbftrl/game.hpp"
#include "vbftrl/replay.hpp"
#include "vbftrl/verify.hpp"

#include <cmath>

namespace py = pybind11;
using namespace vbftrl;

namespace {

HermitianMatrix to_hermitian(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw py::value_error("expected a nonempty square matrix");
  if ((m - m.adjoint()).norm() > 1e-12 * std::max(1.0, m.norm())) throw py::value_error("matrix is not Hermitian");
  return HermitianMatrix(m);
}

std::vector<Observable> to_observables(const std::vector<CMatrix>& mats) {
  std::vector<Observable> out;
  for (const auto& m : mats) out.emplace_back(to_hermitian(m));
  return out;
}

int common_dim(const std::vector<Observable>& obs) {
  if (obs.empty()) throw py::value_error("need at least one observable");
  for (const auto& a : obs)
    if (a.dim() != obs.front().dim()) throw py::value_error("observables have different dimensions");
  return obs.front().dim();
}

py::dict solve_dict(const SolveResult& r) {
  py::dict d;
  d["rho"] = CMatrix(r.rho.mat());
  d["value"] = r.value;
  d["lower_bound"] = r.lower_bound;
  d["iters"] = r.iters;
  d["stop_reason"] = r.stop_reason;
  return d;
}

GameConfig game_config(double lambda, double mu, int max_iters, double value_tol) {
  GameConfig c;
  c.lambda = lambda;
  c.mu = mu;
  c.solver.max_iters = max_iters;
  c.solver.value_tol = value_tol;
  return c;
}

py::dict trace_dict(const GameTrace& g) {
  std::vector<double> loss, pi, gain, miss;
  std::vector<int> iters;
  std::vector<CMatrix> rhos;
  for (const auto& r : g.rounds) {
    loss.push_back(r.loss);
    pi.push_back(r.pi);
    gain.push_back(r.gain);
    miss.push_back(r.miss);
    iters.push_back(r.solve_iters);
    rhos.push_back(r.rho.mat());
  }
  py::dict v;
  v["pi_bound"] = g.violations.pi_bound;
  v["gain_identity"] = g.violations.gain_identity;
  v["miss_bound"] = g.violations.miss_bound;
  v["gain_plus_miss"] = g.violations.gain_plus_miss;
  py::dict d;
  d["d"] = g.d;
  d["T"] = g.T;
  d["lambda"] = g.lambda;
  d["mu"] = g.mu;
  d["seed"] = g.seed;
  d["learner"] = g.learner;
  d["reality"] = g.reality;
  d["loss"] = loss;
  d["pi"] = pi;
  d["gain"] = gain;
  d["miss"] = miss;
  d["solve_iters"] = iters;
  d["rho"] = rhos;
  d["rho_next"] = CMatrix(g.rho_next.mat());
  d["cum_loss"] = g.cum_loss;
  d["hindsight_value"] = g.hindsight_value;
  d["regret"] = g.regret;
  d["bias"] = g.bias;
  d["violations"] = v;
  d["aborted"] = g.aborted;
  d["error"] = g.error;
  return d;
}

}  // namespace

PYBIND11_MODULE(_vbftrl, m) {
  m.doc() = "Volumetric-barrier FTRL for online learning of quantum states with logarithmic loss.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  m.attr("DEFAULT_LAMBDA") = kDefaultLambda;
  m.attr("DEFAULT_MU") = kDefaultMu;

  m.def(
      "play_game",
      [](int d, int T, std::uint64_t seed, const std::string& learner, const std::string& reality, double lambda,
         double mu, int psd_rank, const std::vector<CMatrix>& replay, int max_iters, double value_tol,
         bool allow_large) {
        RealityStrategy s;
        s.kind = parse_reality(reality);
        s.psd_rank = psd_rank;
        s.replay = to_observables(replay);
        GameConfig c = game_config(lambda, mu, max_iters, value_tol);
        c.allow_large = allow_large;
        const LearnerKind l = parse_learner(learner);
        GameTrace g;
        {
          py::gil_scoped_release release;
          g = play_game(l, s, T, d, c, seed);
        }
        return trace_dict(g);
      },
      py::arg("d") = 2, py::arg("T") = 10, py::arg("seed") = 1, py::arg("learner") = "vbftrl",
      py::arg("reality") = "rank-one", py::arg("lambda_") = kDefaultLambda, py::arg("mu") = kDefaultMu,
      py::arg("psd_rank") = -1, py::arg("replay") = std::vector<CMatrix>{}, py::arg("max_iters") = 0,
      py::arg("value_tol") = 1e-10, py::arg("allow_large") = false,
      "Play one game; returns per-round arrays, regret and certificate violation counts.");

  m.def(
      "minimize_potential",
      [](const std::vector<CMatrix>& observables, int d, double lambda, double mu) {
        const auto obs = to_observables(observables);
        if (!obs.empty() && common_dim(obs) != d) throw py::value_error("observable dimension does not match d");
        return solve_dict(minimize_potential(PotentialOracle(d, obs, lambda, mu)));
      },
      py::arg("observables"), py::arg("d"), py::arg("lambda_") = kDefaultLambda, py::arg("mu") = kDefaultMu,
      "argmin of P_t = sum_tau -log tr(A_tau rho) - lambda log det rho + mu V_t over density matrices.");

  m.def(
      "hindsight_optimum",
      [](const std::vector<CMatrix>& observables) {
        const auto obs = to_observables(observables);
        return solve_dict(hindsight_optimum(obs, common_dim(obs)));
      },
      py::arg("observables"), "Best fixed density matrix for the unregularized cumulative loss.");

  m.def(
      "read_replay",
      [](const std::string& path) {
        const ReplayFile f = read_replay_file(path);
        std::vector<CMatrix> mats;
        for (const auto& a : f.observables) mats.push_back(a.mat());
        return mats;
      },
      py::arg("path"));

  m.def(
      "run_verify",
      [](const std::string& suite, std::uint64_t seed, int instances) {
        VerifyOptions o{seed, instances};
        VerifyReport r;
        {
          py::gil_scoped_release release;
          r = run_verify(suite, o);
        }
        py::list out;
        for (const auto& c : r.checks) {
          py::dict d;
          d["suite"] = c.suite;
          d["name"] = c.name;
          d["config"] = c.config;
          d["instances"] = c.instances;
          d["gap"] = c.gap;
          d["tol"] = c.tol;
          d["pass"] = c.pass;
          out.append(d);
        }
        return out;
      },
      py::arg("suite") = "all", py::arg("seed") = 1, py::arg("instances") = 0);

  m.def(
      "parse_config",
      [](const std::string& text) {
        const RunConfig c = parse_config(text, {});
        return dump_config(c);
      },
      py::arg("text"), "Validate config text (no environment overrides); returns the canonical form.");
}
