#include "doctest.h"
#include "support.hpp"

#include "vbftrl/ellipsoid.hpp"
#include "vbftrl/errors.hpp"
#include "vbftrl/fd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

using namespace vbftrl;
using vbftrl::testing::rel_err;

namespace {

std::vector<Observable> rank_one_history(int d, int t, CounterRng& rng) {
  std::vector<Observable> obs;
  for (int k = 0; k < t; ++k) obs.emplace_back(HermitianMatrix::outer(random_unit_vector(d, rng)));
  return obs;
}

std::vector<Observable> diagonal_history(int t, CounterRng& rng) {
  std::vector<Observable> obs;
  for (int k = 0; k < t; ++k) obs.emplace_back(HermitianMatrix::diagonal({rng.uniform(), rng.uniform()}));
  return obs;
}

double off_diagonal_mass(const HermitianMatrix& m) {
  double s = 0.0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j)
      if (i != j) s += std::abs(m(i, j));
  return s;
}

// argmin over p in a grid of f(diag(p, 1 - p)); endpoints included when f is finite there
double grid_argmin(const std::function<double(double)>& f, double step = 1e-4) {
  double best_p = 0.5;
  double best = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(std::lround(1.0 / step));
  for (int i = 0; i <= n; ++i) {
    const double p = i * step;
    double v = std::numeric_limits<double>::infinity();
    try {
      v = f(p);
    } catch (const DomainError&) {
    }
    if (v < best) {
      best = v;
      best_p = p;
    }
  }
  return best_p;
}

HermitianMatrix diag2(double p) { return HermitianMatrix::diagonal({p, 1.0 - p}); }

// Checks every cut of a run and the shape/volume invariants.
struct RunAudit {
  int cuts = 0;
  int checked_points = 0;
  int invalid = 0;
  int non_pd_shapes = 0;
  EllipsoidState last;
  Cut last_cut;
};

EllipsoidObserver audit_potential(const PotentialOracle& oracle, RunAudit& audit, CounterRng& rng, int every = 1) {
  const int d = oracle.dim();
  return [&, d, every](const EllipsoidState& state, const Separation& sep) {
    ++audit.cuts;
    audit.last = state;
    audit.last_cut = sep.cut;
    if (Eigen::LLT<RMatrix>(state.shape).info() != Eigen::Success) ++audit.non_pd_shapes;
    if (state.iteration % every != 0) return;
    const RealChart chart(d);
    const HermitianMatrix rho_k = chart_point(state.center, chart);
    for (int s = 0; s < 200; ++s) {
      // points between the center and a random density matrix, at varied distances
      const DensityMatrix target = random_density(d, rng, 0.05);
      const double w = std::pow(10.0, -4.0 * rng.uniform());
      const HermitianMatrix cand = sep.feasible ? rho_k * (1.0 - w) + target.herm() * w : target.herm();
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
      ++audit.checked_points;
      const double inner = sep.cut.g.dot(chart_coords(cand, chart) - state.center);
      if (inner > 1e-10) ++audit.invalid;
    }
  };
}

}  // namespace

TEST_CASE("initial ellipsoid") {
  const EllipsoidState e = initial_ellipsoid(2);
  CHECK(e.center.size() == 3);
  CHECK(e.shape.isApprox(RMatrix::Identity(3, 3)));
  CHECK_THROWS_AS(initial_ellipsoid(1), std::invalid_argument);

  CounterRng rng(201);
  for (int d = 2; d <= 4; ++d) {
    const RealChart chart(d);
    CHECK(chart_coords(DensityMatrix::maximally_mixed(d), chart).norm() < 1e-15);
    for (int rep = 0; rep < 50; ++rep) {
      const RVector x = chart_coords(HermitianMatrix::outer(random_unit_vector(d, rng)), chart);
      CHECK(std::abs(x.norm() - std::sqrt(1.0 - 1.0 / d)) < 1e-12);
      CHECK(x.norm() < 1.0);
    }
    // chart round trip
    const DensityMatrix rho = random_density(d, rng);
    CHECK((chart_point(chart_coords(rho, chart), chart).mat() - rho.mat()).norm() < 1e-12);
  }
}

TEST_CASE("ellipsoid step") {
  SUBCASE("unit disk, g = (1, 0)") {
    const EllipsoidState disk{RVector::Zero(2), RMatrix::Identity(2, 2), 0};
    RVector g(2);
    g << 1.0, 0.0;
    const EllipsoidState next = ellipsoid_step(disk, {CutKind::gradient, g});
    CHECK(next.center(0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(next.center(1) == 0.0);
    // (n^2/(n^2-1)) (I - 2/(n+1) b b^T) with b = e_1, n = 2
    CHECK(next.shape(0, 0) == doctest::Approx(4.0 / 3.0 * (1.0 - 2.0 / 3.0)).epsilon(1e-15));
    CHECK(next.shape(1, 1) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(next.shape(0, 1) == 0.0);
    CHECK(next.iteration == 1);
  }

  SUBCASE("mirror symmetry") {
    CounterRng rng(202);
    const EllipsoidState e = initial_ellipsoid(3);
    RVector g(8);
    for (int k = 0; k < 8; ++k) g(k) = rng.normal();
    const EllipsoidState plus = ellipsoid_step(e, {CutKind::gradient, g});
    const EllipsoidState minus = ellipsoid_step(e, {CutKind::gradient, -g});
    CHECK((plus.center + minus.center).norm() < 1e-15);
    CHECK((plus.shape - minus.shape).norm() < 1e-15);
  }

  SUBCASE("volume decay over random cut sequences") {
    CounterRng rng(203);
    for (int d = 2; d <= 4; ++d) {
      EllipsoidState e = initial_ellipsoid(d);
      const int n = chart_dim(d);
      for (int k = 1; k <= 400; ++k) {
        RVector g(n);
        for (int i = 0; i < n; ++i) g(i) = rng.normal();
        e = ellipsoid_step(e, {CutKind::gradient, g});
        const Eigen::LLT<RMatrix> llt(e.shape);
        REQUIRE(llt.info() == Eigen::Success);
        const double log_ratio = llt.matrixLLT().diagonal().array().log().sum();  // (1/2) log det
        CHECK(log_ratio <= -static_cast<double>(k) / (2.0 * n + 2.0) + 1e-9);
      }
    }
  }

  CHECK_THROWS_AS(ellipsoid_step(initial_ellipsoid(2), {CutKind::gradient, RVector::Zero(3)}), SolverError);
}

TEST_CASE("separation oracle") {
  const PotentialOracle empty(2, {}, 300.0, 10.0);
  const RealChart chart(2);
  CounterRng rng(204);

  SUBCASE("indefinite point gets a PSD cut that keeps every density matrix") {
    const RVector x = chart_coords(HermitianMatrix::diagonal({1.5, -0.5}), chart);
    const Separation s = separation_oracle(x, empty, {});
    CHECK(s.cut.kind == CutKind::psd_eigvec);
    CHECK_FALSE(s.feasible);
    for (int rep = 0; rep < 200; ++rep) {
      const RVector y = chart_coords(random_density(2, rng, 0.0), chart);
      CHECK(s.cut.g.dot(y - x) <= 0.0);
    }
  }

  SUBCASE("gradient cut at the origin matches finite differences") {
    for (int d = 2; d <= 3; ++d) {
      const PotentialOracle oracle(d, {}, 300.0, 10.0);
      const RealChart ch(d);
      const Separation s = separation_oracle(RVector::Zero(chart_dim(d)), oracle, {});
      CHECK(s.cut.kind == CutKind::gradient);
      CHECK(s.feasible);
      const HermFunction p = [&](const HermitianMatrix& r) { return potential_eval(oracle, r); };
      const DensityMatrix mixed = DensityMatrix::maximally_mixed(d);
      for (int k = 0; k < chart_dim(d); ++k) {
        const double fd = fd_dir_deriv(p, mixed, {ch.basis(k + 1)});
        CHECK(std::abs(s.cut.g(k) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
      }
    }
    // and away from the origin, with history
    const PotentialOracle oracle(2, rank_one_history(2, 3, rng), 300.0, 10.0);
    const DensityMatrix rho = random_density(2, rng, 0.5);
    const Separation s = separation_oracle(chart_coords(rho, chart), oracle, {});
    const HermFunction p = [&](const HermitianMatrix& r) { return potential_eval(oracle, r); };
    for (int k = 0; k < 3; ++k) CHECK(rel_err(s.cut.g(k), fd_dir_deriv(p, rho, {chart.basis(k + 1)})) < 1e-5);
  }

  SUBCASE("closed-form and directional gradient assembly agree") {
    for (int rep = 0; rep < 20; ++rep) {
      const int d = 2 + rep % 3;
      const PotentialOracle oracle(d, rank_one_history(d, rep % 6, rng), 300.0, 10.0);
      const RVector x = chart_coords(random_density(d, rng, 0.3), RealChart(d));
      SolverConfig directional;
      directional.gradient = GradientMode::directional;
      const RVector a = separation_oracle(x, oracle, {}).cut.g;
      const RVector b = separation_oracle(x, oracle, directional).cut.g;
      CHECK((a - b).norm() <= 1e-8 * std::max(1.0, b.norm()));
    }
  }

  SUBCASE("loss-domain cut keeps every point at least as good") {
    const Observable a(HermitianMatrix::diagonal({1.0, 0.0}));
    const PotentialOracle oracle(2, {a}, 300.0, 10.0);
    const HermitianMatrix rho = HermitianMatrix::diagonal({1e-15, 1.0 - 1e-15});
    const RVector x = chart_coords(rho, chart);
    SolverConfig loose;
    loose.tol_psd_cut = 1e-16;  // let the point through the PSD test so the domain test fires
    const Separation s = separation_oracle(x, oracle, loose);
    CHECK(s.cut.kind == CutKind::loss_domain);
    const Separation h = hindsight_separation(x, {a}, 2);
    CHECK(h.cut.kind == CutKind::loss_domain);
    int kept = 0;
    for (int rep = 0; rep < 200; ++rep) {
      const DensityMatrix y = random_density(2, rng, 0.0);
      if (trace_product(a, y) < trace_product(a, rho)) continue;
      ++kept;
      CHECK(s.cut.g.dot(chart_coords(y, chart) - x) <= 1e-15);
      CHECK(h.cut.g.dot(chart_coords(y, chart) - x) <= 1e-15);
    }
    CHECK(kept > 0);
  }

  SUBCASE("default PSD cut threshold") {
    CHECK(default_tol_psd_cut(300.0, 0, 2) == 1e-9);
    CHECK(default_tol_psd_cut(1e-12, 10, 2) == doctest::Approx(1e-12 / (2.0 * (10 + 2e-12))));
  }
}

TEST_CASE("minimize_potential at t = 0 returns I/d") {
  for (int d = 2; d <= 3; ++d) {
    const SolveResult r = minimize_potential(PotentialOracle(d, {}, 300.0, 10.0));
    CHECK((r.rho.mat() - DensityMatrix::maximally_mixed(d).mat()).norm() < 1e-4);
  }
}

TEST_CASE("every cut of a solve is valid and the ellipsoid shrinks at the linear rate") {
  CounterRng rng(205);
  for (int d = 2; d <= 3; ++d) {
    for (int t : {1, 4}) {
      const PotentialOracle oracle(d, rank_one_history(d, t, rng), 300.0, 10.0);
      RunAudit audit;
      CounterRng sampler(206 + d * 10 + t);
      double best = std::numeric_limits<double>::infinity();
      double best_seen_previous = best;
      bool monotone = true;
      const EllipsoidObserver check = audit_potential(oracle, audit, sampler, d == 2 ? 1 : 25);
      const SolveResult r = minimize_potential(oracle, {}, [&](const EllipsoidState& s, const Separation& sep) {
        check(s, sep);
        if (sep.feasible) best = std::min(best, sep.value);
        monotone &= best <= best_seen_previous;
        best_seen_previous = best;
      });
      CAPTURE(d);
      CAPTURE(t);
      CHECK(audit.invalid == 0);
      CHECK(audit.checked_points > 0);
      CHECK(audit.non_pd_shapes == 0);
      CHECK(monotone);
      CHECK(r.value <= best);
      CHECK(r.value - r.lower_bound < 1e-9);

      const int n = chart_dim(d);
      const EllipsoidState final_state = ellipsoid_step(audit.last, audit.last_cut);
      const double log_ratio = Eigen::LLT<RMatrix>(final_state.shape).matrixLLT().diagonal().array().log().sum();
      CHECK(std::abs(log_ratio - r.log_volume_ratio) < 1e-8);
      CHECK(r.log_volume_ratio <= -static_cast<double>(audit.cuts) / (2.0 * n + 2.0) + 1e-9);
    }
  }
}

TEST_CASE("OPS instance: diagonal observables give diagonal iterates") {
  CounterRng rng(207);
  for (int rep = 0; rep < 3; ++rep) {
    const PotentialOracle oracle(2, diagonal_history(5 + 5 * rep, rng), 300.0, 10.0);
    const SolveResult r = minimize_potential(oracle);
    CHECK(off_diagonal_mass(r.rho) < 1e-4);
    const double p = grid_argmin([&](double q) { return potential_eval(oracle, diag2(q)); });
    CHECK(std::abs(r.rho.mat()(0, 0).real() - p) < 1e-3);
  }
}

TEST_CASE("L_t minimizer stays away from the boundary") {
  CounterRng rng(208);
  for (int rep = 0; rep < 6; ++rep) {
    const int d = 2 + rep % 2;
    const int t = 5 + 10 * rep;
    const double lambda = rep < 3 ? 300.0 : 1.0;
    const PotentialOracle oracle(d, rank_one_history(d, t, rng), lambda, 0.0);
    const SolveResult r = minimize_potential(oracle);
    CHECK(eigvals_herm(r.rho.mat())(0) >= lambda / (4.0 * (t + lambda * d)));
  }
}

TEST_CASE("hindsight optimum") {
  SUBCASE("single boundary observable") {
    const SolveResult r = hindsight_optimum({Observable(HermitianMatrix::diagonal({1.0, 0.0}))}, 2);
    CHECK(r.value < 1e-3);
    CHECK(r.value >= 0.0);
  }
  SUBCASE("commuting instance matches grid search") {
    CounterRng rng(209);
    for (int rep = 0; rep < 3; ++rep) {
      const auto obs = diagonal_history(4 + 4 * rep, rng);
      const SolveResult r = hindsight_optimum(obs, 2);
      const auto total = [&](double q) {
        double v = 0.0;
        for (const auto& a : obs) v += loss_eval(a, diag2(q));
        return v;
      };
      const double p = grid_argmin(total);
      CHECK(std::abs(r.value - total(p)) < 1e-3);
      CHECK(std::abs(r.rho.mat()(0, 0).real() - p) < 1e-3);
    }
  }
  SUBCASE("value is below every sampled density matrix") {
    CounterRng rng(210);
    for (int d = 2; d <= 3; ++d) {
      const auto obs = rank_one_history(d, 6, rng);
      const SolveResult r = hindsight_optimum(obs, d);
      for (int rep = 0; rep < 200; ++rep) {
        const DensityMatrix y = random_density(d, rng, 0.0);
        double v = 0.0;
        for (const auto& a : obs) v += loss_eval(a, y);
        CHECK(v >= r.value - 1e-3);
      }
    }
  }
  CHECK_THROWS_AS(hindsight_optimum({}, 2), std::invalid_argument);
}

TEST_CASE("per-iteration cost stays within the O(t d^6 + d^8) envelope") {
  // normalized cost c(d, t) = seconds per iteration / (t d^6 + d^8); the model is an upper
  // envelope, so the d = 4 cells may not exceed the cheapest normalized cell by more than 4x
  std::vector<double> normalized;
  CounterRng rng(211);
  for (int d = 2; d <= 4; ++d) {
    for (int t : {5, 20}) {
      const PotentialOracle oracle(d, rank_one_history(d, t, rng), 300.0, 10.0);
      SolverConfig c;
      c.max_iters = 60;
      c.value_tol = -1.0;
      c.gradient = GradientMode::directional;
      double best = std::numeric_limits<double>::infinity();
      for (int rep = 0; rep < 3; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        const SolveResult r = minimize_potential(oracle, c);
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        best = std::min(best, s / r.iters);
      }
      normalized.push_back(best / (t * std::pow(d, 6) + std::pow(d, 8)));
    }
  }
  const double lo = *std::min_element(normalized.begin(), normalized.end());
  // cost grows no faster than the model: the largest d must not be the expensive outlier
  CHECK(normalized.back() <= 4.0 * lo);
  CHECK(normalized[normalized.size() - 2] <= 4.0 * lo);
}
