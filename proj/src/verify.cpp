#include "vbftrl/verify.hpp"

#include "vbftrl/derivatives.hpp"
#include "vbftrl/ellipsoid.hpp"
#include "vbftrl/errors.hpp"
#include "vbftrl/fd.hpp"
#include "vbftrl/potential.hpp"
#include "vbftrl/random.hpp"
#include "vbftrl/replay.hpp"
#include "vbftrl/vbc.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace vbftrl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}); }

// Worst-instance accumulator for one check family.
class Batch {
 public:
  Batch(std::string suite, std::string name, std::string config, std::uint64_t seed, double tol, Criterion c)
      : r_{std::move(suite), std::move(name), std::move(config), seed, 0, c == Criterion::at_least ? kInf : -kInf,
           tol, c, true} {}

  void add(double gap) {
    ++r_.instances;
    if (std::isnan(gap)) {
      nan_ = true;
      return;
    }
    r_.gap = r_.criterion == Criterion::at_least ? std::min(r_.gap, gap) : std::max(r_.gap, gap);
  }

  CheckResult result() const {
    CheckResult out = r_;
    if (nan_) out.gap = std::numeric_limits<double>::quiet_NaN();
    switch (out.criterion) {
      case Criterion::at_most:
        out.pass = !nan_ && out.gap <= out.tol;
        break;
      case Criterion::at_least:
        out.pass = !nan_ && out.gap >= -out.tol;
        break;
      case Criterion::flag:
        out.pass = !nan_ && out.gap == 0.0;
        break;
    }
    out.pass = out.pass && out.instances > 0;
    return out;
  }

 private:
  CheckResult r_;
  bool nan_ = false;
};

std::string cfg(int d, int t) { return "d=" + std::to_string(d) + " t=" + std::to_string(t); }
std::string cfg(int d) { return "d=" + std::to_string(d); }

// Independent stream per (suite, configuration) so suites can run alone or in "all".
CounterRng stream(std::uint64_t seed, int suite, int d, int t = 0) {
  return CounterRng(seed, static_cast<std::uint64_t>(suite) * 1000 + static_cast<std::uint64_t>(d) * 10 +
                              static_cast<std::uint64_t>(t));
}

HermitianMatrix unit_direction(int d, CounterRng& rng) {
  const HermitianMatrix u = random_hermitian(d, rng);
  return u * (1.0 / u.frobenius_norm());
}

DensityMatrix interior_density(int d, CounterRng& rng) { return random_density(d, rng, 0.5); }

Observable random_observable(int d, int k, CounterRng& rng) {
  // alternate rank-one and full-rank observables
  return Observable(k % 2 == 0 ? HermitianMatrix::outer(random_unit_vector(d, rng)) : random_psd(d, rng));
}

PotentialOracle random_oracle(int d, int t, CounterRng& rng) {
  std::vector<Observable> obs;
  for (int k = 0; k < t; ++k) obs.push_back(random_observable(d, k, rng));
  return {d, obs, 300.0, 10.0};
}

// Density matrix with smallest eigenvalue min_eig and a random eigenbasis.
DensityMatrix density_with_min_eig(int d, double min_eig, CounterRng& rng) {
  const HermitianEigen basis = eig_herm(random_hermitian(d, rng));
  RVector ev(d);
  ev(0) = min_eig;
  double rest = 0.0;
  for (int i = 1; i < d; ++i) rest += (ev(i) = 0.5 + rng.uniform());
  for (int i = 1; i < d; ++i) ev(i) *= (1.0 - min_eig) / rest;
  const CMatrix m = basis.vectors * ev.cast<Complex>().asDiagonal() * basis.vectors.adjoint();
  return DensityMatrix::from(HermitianMatrix(m));
}

CMatrix random_complex(int n, CounterRng& rng) {
  CMatrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = rng.complex_normal();
  return m;
}

HermitianMatrix scalar(double x) { return HermitianMatrix::identity(1) * x; }

using Out = std::vector<CheckResult>;

void suite_kron(const VerifyOptions& o, int n, Out& out) {
  for (int d = 2; d <= 4; ++d) {
    CounterRng rng = stream(o.seed, 1, d);
    Batch vec_kron("kron", "vec(AXB)=(B^T(x)A)vec(X)", cfg(d), o.seed, 1e-12, Criterion::at_most);
    Batch mixed("kron", "mixed-product", cfg(d), o.seed, 1e-12, Criterion::at_most);
    Batch adjoint("kron", "adjoint", cfg(d), o.seed, 0.0, Criterion::at_most);
    Batch roundtrip("kron", "vec-roundtrip", cfg(d), o.seed, 0.0, Criterion::at_most);
    Batch inner("kron", "hs-inner=vec^*vec", cfg(d), o.seed, 1e-12, Criterion::at_most);
    for (int i = 0; i < n; ++i) {
      const CMatrix a = random_complex(d, rng);
      const CMatrix b = random_complex(d, rng);
      const CMatrix c = random_complex(d, rng);
      const CMatrix e = random_complex(d, rng);
      const CMatrix x = random_complex(d, rng);
      vec_kron.add((vec(CMatrix(a * x * b)) - kron(b.transpose(), a) * vec(x)).norm() /
                   (a.norm() * x.norm() * b.norm()));
      mixed.add((kron(a, b) * kron(c, e) - kron(a * c, b * e)).norm() / (a.norm() * b.norm() * c.norm() * e.norm()));
      adjoint.add((kron(a, b).adjoint() - kron(a.adjoint(), b.adjoint())).norm());
      const HermitianMatrix h = random_hermitian(d, rng);
      const HermitianMatrix g = random_hermitian(d, rng);
      roundtrip.add((vec_inv(vec(h)).mat() - h.mat()).norm());
      const double via_vec = vec(h).dot(vec(g)).real();  // dot conjugates the first argument
      inner.add(std::abs(hs_inner(h, g) - via_vec) / std::max(1.0, h.frobenius_norm() * g.frobenius_norm()));
    }
    Batch ortho("kron", "chart-orthonormal", cfg(d), o.seed, 1e-12, Criterion::at_most);
    const RealChart chart(d);
    for (int i = 0; i < chart.real_dim(); ++i)
      for (int j = 0; j < chart.real_dim(); ++j)
        ortho.add(std::abs(hs_inner(chart.basis(i), chart.basis(j)) - (i == j ? 1.0 : 0.0)));
    for (const Batch* b : {&vec_kron, &mixed, &adjoint, &roundtrip, &inner, &ortho}) out.push_back(b->result());
  }
}

void suite_derivs(const VerifyOptions& o, int n, Out& out) {
  for (int d = 2; d <= 3; ++d) {
    for (int t : {0, 1, 3}) {
      CounterRng rng = stream(o.seed, 2, d, t);
      std::vector<Batch> b;
      const auto add = [&](const std::string& name, double tol) {
        b.emplace_back("derivs", name, cfg(d, t), o.seed, tol, Criterion::at_most);
      };
      add("f.order1", 1e-6);
      add("f.order2", 1e-6);
      add("R.order1", 1e-6);
      add("R.order2", 1e-6);
      add("R.order3", 1e-4);
      add("R.order4", 1e-4);
      add("L.order1", 1e-6);
      add("L.order2", 1e-6);
      add("V.order1", 1e-6);
      add("V.order2", 1e-6);
      add("P.order1", 1e-6);
      add("P.order2", 1e-6);
      add("H.bilinear=D2L", 1e-10);
      for (int i = 0; i < n; ++i) {
        const PotentialOracle oracle = random_oracle(d, t, rng);
        // f_t is the newest loss of the history; a fresh observable stands in at t = 0
        const Observable a = t > 0 ? oracle.observables().back() : random_observable(d, i, rng);
        const DensityMatrix rho = interior_density(d, rng);
        const HermitianMatrix u = unit_direction(d, rng);
        const HermitianMatrix v = unit_direction(d, rng);
        const HermitianMatrix w = unit_direction(d, rng);
        const HermitianMatrix z = unit_direction(d, rng);
        const LocalModel m = oracle.at(rho);

        const HermFunction f = [&](const HermitianMatrix& x) { return loss_eval(a, x); };
        const HermFunction r = [](const HermitianMatrix& x) { return logdet_eval(x); };
        const HermFunction l = [&](const HermitianMatrix& x) { return oracle.at(x).cum_loss(); };
        const HermFunction vb = [&](const HermitianMatrix& x) { return oracle.at(x).vb(); };
        const HermFunction p = [&](const HermitianMatrix& x) { return oracle.at(x).potential(); };

        b[0].add(rel_err(loss_dir_deriv(a, rho, {u}), fd_dir_deriv(f, rho, {u})));
        b[1].add(rel_err(loss_dir_deriv(a, rho, {u, v}), fd_dir_deriv(f, rho, {u, v})));
        b[2].add(rel_err(logdet_dir_deriv(rho, {u}), fd_dir_deriv(r, rho, {u})));
        b[3].add(rel_err(logdet_dir_deriv(rho, {u, v}), fd_dir_deriv(r, rho, {u, v})));
        b[4].add(rel_err(logdet_dir_deriv(rho, {u, v, w}), fd_dir_deriv(r, rho, {u, v, w})));
        b[5].add(rel_err(logdet_dir_deriv(rho, {u, v, w, z}), fd_dir_deriv(r, rho, {u, v, w, z})));
        b[6].add(rel_err(m.cum_loss_dir_deriv({u}), fd_dir_deriv(l, rho, {u})));
        b[7].add(rel_err(m.cum_loss_dir_deriv({u, v}), fd_dir_deriv(l, rho, {u, v})));
        b[8].add(rel_err(m.vb_dir_deriv(u), fd_dir_deriv(vb, rho, {u})));
        b[9].add(rel_err(m.vb_second(u, v), fd_dir_deriv(vb, rho, {u, v})));
        b[10].add(rel_err(m.potential_dir_deriv(u), fd_dir_deriv(p, rho, {u})));
        b[11].add(rel_err(m.potential_second(u, v), fd_dir_deriv(p, rho, {u, v})));
        b[12].add(rel_err(vec(u).dot(m.hessian() * vec(v)).real(), m.cum_loss_dir_deriv({u, v})));
      }
      for (const auto& x : b) out.push_back(x.result());
    }
  }
}

double vbc_normalized(const GapResult& g) { return g.gap / std::max(g.scale, 1e-300); }

void suite_vbc(const VerifyOptions& o, int n, Out& out) {
  constexpr double kTol = 1e-9;
  constexpr double kFdTol = 1e-3;
  {
    // -log x satisfies the defining inequality with equality; gap is reported unnormalized
    Batch eq("vbc", "neglog.equality", "d=1", o.seed, 1e-12, Criterion::at_most);
    const DerivOracle phi = neg_log_scalar_oracle();
    for (double x : {0.125, 0.5, 1.0, 2.0, 8.0})
      for (double u : {-2.0, 0.5, 1.0})
        for (double v : {-1.0, 0.25, 4.0}) {
          const GapResult g = vbc_gap(phi, scalar(x), scalar(u), scalar(v));
          eq.add(std::abs(g.gap) / std::max(1.0, g.scale));
        }
    out.push_back(eq.result());
  }
  for (int d = 2; d <= 3; ++d) {
    for (int t : {0, 1, 3}) {
      CounterRng rng = stream(o.seed, 3, d, t);
      Batch f("vbc", "f.gap", cfg(d, t), o.seed, kTol, Criterion::at_least);
      Batch r("vbc", "R.gap", cfg(d, t), o.seed, kTol, Criterion::at_least);
      Batch l("vbc", "L.gap", cfg(d, t), o.seed, kTol, Criterion::at_least);
      Batch sum("vbc", "sum-rule(f,R)", cfg(d, t), o.seed, kTol, Criterion::at_least);
      Batch boundary("vbc", "L.gap.min-eig-1e-3", cfg(d, t), o.seed, kTol, Criterion::at_least);
      Batch agree("vbc", "L.fd-verdict-disagreements", cfg(d, t), o.seed, 0.0, Criterion::flag);
      for (int i = 0; i < n; ++i) {
        const PotentialOracle oracle = random_oracle(d, t, rng);
        const Observable a = random_observable(d, i, rng);
        const DensityMatrix rho = interior_density(d, rng);
        const HermitianMatrix u = unit_direction(d, rng);
        const HermitianMatrix v = unit_direction(d, rng);
        f.add(vbc_normalized(vbc_gap(loss_oracle(a), rho, u, v)));
        r.add(vbc_normalized(vbc_gap(logdet_oracle(d), rho, u, v)));
        const DerivOracle cum = cum_loss_oracle(oracle);
        const GapResult lg = vbc_gap(cum, rho, u, v);
        l.add(vbc_normalized(lg));
        const double alpha = 0.1 + rng.uniform();
        const double beta = 0.1 + 300.0 * rng.uniform();
        sum.add(vbc_normalized(vbc_sum_check(loss_oracle(a), logdet_oracle(d), alpha, beta, rho, u, v)));
        const DensityMatrix edge = density_with_min_eig(d, 1e-3, rng);
        boundary.add(vbc_normalized(vbc_gap(cum, edge, u, v)));
        const bool exact_verdict = lg.passes(kTol);
        const bool fd_verdict = vbc_gap(fd_backed(cum), rho, u, v).passes(kFdTol);
        agree.add(exact_verdict == fd_verdict ? 0.0 : 1.0);
      }
      for (const Batch* b : {&f, &r, &l, &sum, &boundary, &agree}) out.push_back(b->result());
    }
  }
}

double sc_normalized(const GapResult& g) { return g.gap / std::max(g.scale, 1e-300); }

void suite_sc(const VerifyOptions& o, int n, Out& out) {
  constexpr double kTol = 1e-8;
  for (int d = 2; d <= 3; ++d) {
    for (int t : {1, 3}) {
      CounterRng rng = stream(o.seed, 4, d, t);
      Batch f("sc", "f.gap(M=1)", cfg(d, t), o.seed, kTol, Criterion::at_least);
      Batch r("sc", "R.gap(M=1)", cfg(d, t), o.seed, kTol, Criterion::at_least);
      Batch l("sc", "L.gap(M=1)", cfg(d, t), o.seed, kTol, Criterion::at_least);
      Batch agree("sc", "L.fd-verdict-disagreements", cfg(d, t), o.seed, 0.0, Criterion::flag);
      for (int i = 0; i < n; ++i) {
        const PotentialOracle oracle = random_oracle(d, t, rng);
        const Observable a = random_observable(d, i, rng);
        const DensityMatrix rho = interior_density(d, rng);
        const HermitianMatrix u = random_hermitian(d, rng);
        f.add(sc_normalized(sc_gap(loss_oracle(a), rho, u)));
        r.add(sc_normalized(sc_gap(logdet_oracle(d), rho, u)));
        // L_t is self-concordant with M = 1 as a sum of self-concordant terms
        const DerivOracle cum = cum_loss_oracle(oracle);
        const GapResult g = sc_gap(cum, rho, u, 1.0);
        l.add(sc_normalized(g));
        agree.add(g.passes(kTol) == sc_gap(fd_backed(cum), rho, u, 1.0).passes(1e-3) ? 0.0 : 1.0);
      }
      for (const Batch* b : {&f, &r, &l, &agree}) out.push_back(b->result());
    }
  }
}

double sandwich_margin(const SandwichResult& s) {
  const double scale = std::max({std::abs(s.lower), std::abs(s.mid), std::abs(s.upper), 1e-300});
  return std::min(s.mid - s.lower, s.upper - s.mid) / scale;
}

void suite_sandwich(const VerifyOptions& o, int n, Out& out) {
  constexpr double kSlack = 1e-3;
  {
    Batch s("sandwich", "neglog", "d=1", o.seed, kSlack, Criterion::at_least);
    for (double x : {0.25, 0.5, 1.0, 4.0}) s.add(sandwich_margin(sandwich_check(neg_log_scalar_oracle(), scalar(x), scalar(1.0))));
    out.push_back(s.result());
  }
  for (int d = 2; d <= 3; ++d) {
    CounterRng rng = stream(o.seed, 5, d);
    Batch s("sandwich", "lambdaR@I/d", cfg(d), o.seed, kSlack, Criterion::at_least);
    for (int i = 0; i < 5; ++i) {
      s.add(sandwich_margin(
          sandwich_check(logdet_oracle(d, 300.0), DensityMatrix::maximally_mixed(d), unit_direction(d, rng))));
    }
    out.push_back(s.result());
  }
  CounterRng rng = stream(o.seed, 5, 2, 9);
  Batch l("sandwich", "L_t(t=0..3)", "d=2", o.seed, kSlack, Criterion::at_least);
  for (int i = 0; i < n; ++i) {
    const PotentialOracle oracle = random_oracle(2, i % 4, rng);
    l.add(sandwich_margin(sandwich_check(cum_loss_oracle(oracle), interior_density(2, rng), unit_direction(2, rng))));
  }
  out.push_back(l.result());
}

void suite_ineqs(const VerifyOptions& o, int n, Out& out) {
  constexpr double kTol = 1e-10;
  CounterRng rng = stream(o.seed, 6, 0);
  Batch ans("ineqs", "anstreicher", "d=2..4", o.seed, kTol, Criterion::at_least);
  Batch tr("ineqs", "trace-ineq(A=CB^-1C+P)", "d=2..4", o.seed, kTol, Criterion::at_least);
  Batch hyp("ineqs", "trace-ineq.premise-failures", "d=2..4", o.seed, 0.0, Criterion::flag);
  for (int i = 0; i < n; ++i) {
    const int d = 2 + i % 3;
    const GapResult g = anstreicher_gap(random_hermitian(d, rng), random_hermitian(d, rng));
    ans.add(g.gap / std::max(g.scale, 1.0));
    // constructed so that <v,Av><v,Bv> >= <v,Cv>^2 (Cauchy-Schwarz in the B-inner product)
    const HermitianMatrix b = random_psd(d, rng) + HermitianMatrix::identity(d) * 0.05;
    const HermitianMatrix c = random_hermitian(d, rng);
    const HermitianMatrix a(c.mat() * inverse_pd(b) * c.mat() + random_psd(d, rng, 1).mat() * rng.uniform());
    const TraceIneqResult r = trace_ineq_gap(a, b, c, rng);
    tr.add(r.gap / std::max(1.0, r.scale));
    hyp.add(r.hypothesis_verified ? 0.0 : 1.0);
  }
  for (const Batch* b : {&ans, &tr, &hyp}) out.push_back(b->result());
}

void suite_ellipsoid(const VerifyOptions& o, int n, Out& out) {
  for (int d = 2; d <= 3; ++d) {
    Batch center("ellipsoid", "t=0 solve -> I/d (Frobenius)", cfg(d), o.seed, 1e-4, Criterion::at_most);
    const SolveResult r0 = minimize_potential(PotentialOracle(d, {}, 300.0, 10.0));
    center.add((r0.rho.mat() - DensityMatrix::maximally_mixed(d).mat()).norm());
    out.push_back(center.result());

    for (int t : {1, 4}) {
      CounterRng rng = stream(o.seed, 7, d, t);
      CounterRng sampler = stream(o.seed, 8, d, t);
      Batch decay("ellipsoid", "log-volume + K/(2n+2)", cfg(d, t), o.seed, 1e-9, Criterion::at_most);
      Batch valid("ellipsoid", "invalid cuts (200 samples each)", cfg(d, t), o.seed, 0.0, Criterion::flag);
      Batch gap("ellipsoid", "certified value gap", cfg(d, t), o.seed, 1e-9, Criterion::at_most);
      const RealChart chart(d);
      const int dim = chart_dim(d);
      for (int i = 0; i < n; ++i) {
        std::vector<Observable> obs;
        for (int k = 0; k < t; ++k) obs.emplace_back(HermitianMatrix::outer(random_unit_vector(d, rng)));
        const PotentialOracle oracle(d, obs, 300.0, 10.0);
        int cuts = 0;
        EllipsoidState last_state;
        Cut last_cut;
        const EllipsoidObserver audit = [&](const EllipsoidState& state, const Separation& sep) {
          ++cuts;
          last_state = state;
          last_cut = sep.cut;
          const HermitianMatrix center_rho = chart_point(state.center, chart);
          int bad = 0;
          for (int s = 0; s < 200; ++s) {
            // feasible points between the center and a random density matrix, at varied distances;
            // a gradient cut must keep every point at least as good as the center
            const DensityMatrix target = random_density(d, sampler, 0.05);
            const double w = std::pow(10.0, -4.0 * sampler.uniform());
            const HermitianMatrix cand = sep.feasible ? center_rho * (1.0 - w) + target.herm() * w : target.herm();
            if (!is_density(cand)) continue;
            if (sep.feasible) {
              double value = 0.0;
              try {
                value = potential_eval(oracle, cand);
              } catch (const DomainError&) {
                continue;
              }
              if (value > sep.value) continue;
            }
            if (sep.cut.g.dot(chart_coords(cand, chart) - state.center) > 1e-10) ++bad;
          }
          valid.add(bad);
        };
        const SolveResult r = minimize_potential(oracle, {}, audit);
        // log vol(E_K)/vol(E_1) measured from the final shape (E_1 is the unit ball)
        const EllipsoidState final_state = ellipsoid_step(last_state, last_cut);
        const double log_ratio = Eigen::LLT<RMatrix>(final_state.shape).matrixLLT().diagonal().array().log().sum();
        decay.add(log_ratio + static_cast<double>(cuts) / (2.0 * dim + 2.0));
        gap.add(r.value - r.lower_bound);
      }
      for (const Batch* b : {&decay, &valid, &gap}) out.push_back(b->result());
    }
  }
  Batch boundary("ellipsoid", "hindsight A=diag(1,0) value", "d=2", o.seed, 1e-3, Criterion::at_most);
  boundary.add(hindsight_optimum({Observable(HermitianMatrix::diagonal({1.0, 0.0}))}, 2).value);
  out.push_back(boundary.result());
}

using SuiteFn = void (*)(const VerifyOptions&, int, Out&);

SuiteFn suite_fn(const std::string& name) {
  if (name == "kron") return suite_kron;
  if (name == "derivs") return suite_derivs;
  if (name == "vbc") return suite_vbc;
  if (name == "sc") return suite_sc;
  if (name == "sandwich") return suite_sandwich;
  if (name == "ineqs") return suite_ineqs;
  if (name == "ellipsoid") return suite_ellipsoid;
  return nullptr;
}

}  // namespace

int VerifyReport::failures() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.pass; }));
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names = {"kron", "derivs", "vbc", "sc", "sandwich", "ineqs", "ellipsoid"};
  return names;
}

int default_instances(const std::string& suite) {
  if (suite == "sandwich") return 50;
  if (suite == "ineqs") return 200;
  if (suite == "ellipsoid") return 1;
  if (suite_fn(suite) != nullptr) return 100;
  throw ConfigError("unknown suite '" + suite + "'");
}

VerifyReport run_verify(const std::string& suite, const VerifyOptions& options) {
  if (options.instances < 0) throw ConfigError("instance count must be >= 0");
  VerifyReport report;
  const auto run_one = [&](const std::string& name) {
    const int n = options.instances > 0 ? options.instances : default_instances(name);
    suite_fn(name)(options, n, report.checks);
  };
  if (suite == "all") {
    for (const auto& name : verify_suites()) run_one(name);
  } else {
    if (suite_fn(suite) == nullptr) {
      throw ConfigError("unknown suite '" + suite + "' (expected kron, derivs, vbc, sc, sandwich, ineqs, ellipsoid or all)");
    }
    run_one(suite);
  }
  return report;
}

std::string format_check(const CheckResult& c) {
  const char* rule = c.criterion == Criterion::at_most ? "gap <= tol" : c.criterion == Criterion::at_least ? "gap >= -tol" : "gap == 0";
  char nums[160];
  std::snprintf(nums, sizeof nums, "seed=%llu n=%d gap=%.3e tol=%.0e", static_cast<unsigned long long>(c.seed),
                c.instances, c.gap, c.tol);
  return std::string(c.pass ? "PASS" : "FAIL") + "  " + c.suite + "  " + c.name + "  [" + c.config + "]  " + nums +
         "  (" + rule + ")";
}

void print_report(std::ostream& out, const VerifyReport& report) {
  for (const auto& c : report.checks) out << format_check(c) << "\n";
  out << report.checks.size() - static_cast<std::size_t>(report.failures()) << "/" << report.checks.size()
      << " checks passed\n";
}

}  // namespace vbftrl
