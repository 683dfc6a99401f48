#include "doctest.h"
#include "support.hpp"

#include "vbftrl/errors.hpp"
#include "vbftrl/vbc.hpp"

#include <cmath>
#include <vector>

using namespace vbftrl;
using vbftrl::testing::density_with_min_eig;
using vbftrl::testing::interior_density;
using vbftrl::testing::rel_err;
using vbftrl::testing::unit_direction;

namespace {

constexpr double kAnalyticSlack = 1e-9;
constexpr double kFdSlack = 1e-3;

PotentialOracle history(int d, int t, CounterRng& rng) {
  std::vector<Observable> obs;
  for (int k = 0; k < t; ++k) {
    obs.emplace_back(k % 2 == 0 ? HermitianMatrix::outer(random_unit_vector(d, rng)) : random_psd(d, rng));
  }
  return {d, obs, 300.0, 10.0};
}

HermitianMatrix scalar(double x) { return HermitianMatrix::identity(1) * x; }

}  // namespace

TEST_CASE("vbc_gap of -log x is exactly zero") {
  const DerivOracle phi = neg_log_scalar_oracle();
  for (double x : {0.1, 0.5, 1.0, 3.0}) {
    for (double u : {-2.0, 0.7}) {
      const GapResult g = vbc_gap(phi, scalar(x), scalar(u), scalar(1.3));
      CHECK(std::abs(g.gap) <= 1e-12 * g.scale);
      CHECK(g.passes(kAnalyticSlack));
    }
  }
  CHECK_THROWS_AS(vbc_gap(phi, scalar(-1.0), scalar(1.0), scalar(1.0)), DomainError);
}

TEST_CASE("vbc_gap for -log det and the losses") {
  CounterRng rng(101);
  for (int rep = 0; rep < 100; ++rep) {
    const int d = 2 + rep % 2;
    const DensityMatrix rho = interior_density(d, rng);
    const HermitianMatrix u = unit_direction(d, rng);
    const HermitianMatrix v = unit_direction(d, rng);
    CHECK(vbc_gap(logdet_oracle(d), rho, u, v).passes(kAnalyticSlack));
    const Observable a(rep % 2 == 0 ? HermitianMatrix::outer(random_unit_vector(d, rng)) : random_psd(d, rng));
    CHECK(vbc_gap(loss_oracle(a), rho, u, v).passes(kAnalyticSlack));
  }
}

TEST_CASE("vbc_sum_check") {
  const DerivOracle phi = neg_log_scalar_oracle();
  CHECK(vbc_sum_check(phi, phi, 1.0, 1.0, scalar(0.4), scalar(1.0), scalar(-0.5)).passes(kAnalyticSlack));
  CHECK_THROWS_AS(vbc_sum_check(phi, phi, 0.0, 1.0, scalar(0.4), scalar(1.0), scalar(1.0)),
                  std::invalid_argument);

  CounterRng rng(102);
  for (int rep = 0; rep < 60; ++rep) {
    const int d = 2 + rep % 2;
    const PotentialOracle h = history(d, rep % 4, rng);
    const DensityMatrix rho = interior_density(d, rng);
    const HermitianMatrix u = unit_direction(d, rng);
    const HermitianMatrix v = unit_direction(d, rng);
    CHECK(vbc_gap(cum_loss_oracle(h), rho, u, v).passes(kAnalyticSlack));

    // alpha -> 0+ recovers the second summand
    const Observable a(random_psd(d, rng));
    const GapResult limit = vbc_sum_check(loss_oracle(a), logdet_oracle(d), 1e-12, 1.0, rho, u, v);
    const GapResult alone = vbc_gap(logdet_oracle(d), rho, u, v);
    CHECK(std::abs(limit.gap - alone.gap) <= 1e-6 * alone.scale);
  }
}

TEST_CASE("vbc_gap of L_t near the boundary") {
  CounterRng rng(103);
  for (double min_eig : {1e-2, 1e-3, 1e-4}) {
    for (int rep = 0; rep < 20; ++rep) {
      const int d = 2 + rep % 2;
      const PotentialOracle h = history(d, 1 + rep % 3, rng);
      const DensityMatrix rho = density_with_min_eig(d, min_eig, rng);
      const GapResult g = vbc_gap(cum_loss_oracle(h), rho, unit_direction(d, rng), unit_direction(d, rng));
      CHECK(g.passes(kAnalyticSlack));
    }
  }
}

TEST_CASE("self-concordance gaps") {
  CounterRng rng(104);
  for (int rep = 0; rep < 100; ++rep) {
    const int d = 2 + rep % 2;
    const DensityMatrix rho = interior_density(d, rng);
    const HermitianMatrix u = random_hermitian(d, rng);
    const Observable a(random_psd(d, rng, 1 + rep % d));
    CHECK(sc_gap(loss_oracle(a), rho, u).passes(1e-8));
    CHECK(sc_gap(logdet_oracle(d), rho, u).passes(1e-8));
  }

  const HermitianMatrix u = random_hermitian(2, rng);
  const GapResult q = sc_gap(quadratic_oracle(2), interior_density(2, rng), u);
  CHECK(rel_err(q.gap, 2.0 * std::pow(2.0, 1.5) * std::pow(u.frobenius_norm(), 3.0), 1e-12) < 1e-12);

  // -(quadratic) is concave: D^2 < 0
  const DerivOracle concave = weighted_sum(quadratic_oracle(2), -1.0, logdet_oracle(2), 1e-6);
  CHECK_THROWS_AS(sc_gap(concave, interior_density(2, rng), u), DomainError);
}

TEST_CASE("Hessian sandwich") {
  SUBCASE("-log x closed form") {
    const SandwichResult s = sandwich_check(neg_log_scalar_oracle(), scalar(0.5), scalar(1.0));
    CHECK(s.upper == doctest::Approx(3.0 / 0.25).epsilon(1e-12));
    CHECK(s.lower == doctest::Approx(1.0 / 0.25).epsilon(1e-12));
    CHECK(s.mid == doctest::Approx(1.0 / 0.25).epsilon(1e-6));
    CHECK(s.holds(kFdSlack));
  }

  SUBCASE("lambda R at the maximally mixed state") {
    CounterRng rng(105);
    for (int d = 2; d <= 3; ++d) {
      const SandwichResult s =
          sandwich_check(logdet_oracle(d, 300.0), DensityMatrix::maximally_mixed(d), unit_direction(d, rng));
      CHECK(s.holds(kFdSlack));
    }
  }

  SUBCASE("L_t at d = 2") {
    CounterRng rng(106);
    for (int rep = 0; rep < 20; ++rep) {
      const PotentialOracle h = history(2, rep % 4, rng);
      const SandwichResult s = sandwich_check(cum_loss_oracle(h), interior_density(2, rng), unit_direction(2, rng));
      CHECK(s.holds(kFdSlack));
      CHECK(s.lower <= s.upper);
    }
  }

  SUBCASE("analytic mid agrees with the volumetric barrier of the potential oracle") {
    CounterRng rng(107);
    for (int rep = 0; rep < 10; ++rep) {
      const PotentialOracle h = history(2, 1 + rep % 3, rng);
      const DensityMatrix rho = interior_density(2, rng);
      const HermitianMatrix u = unit_direction(2, rng);
      const SandwichResult s = sandwich_check(cum_loss_oracle(h), rho, u);
      const LocalModel m = h.at(rho);
      CHECK(rel_err(s.mid, m.vb_second(u, u)) < 1e-5);
      CHECK(rel_err(s.upper, m.q_form(u)) < 1e-9);
    }
  }
}

TEST_CASE("analytic and finite-difference oracles give the same verdicts") {
  CounterRng rng(108);
  for (int d = 2; d <= 3; ++d) {
    for (int t : {0, 1, 3}) {
      int agree_vbc = 0;
      int agree_sc = 0;
      for (int rep = 0; rep < 100; ++rep) {
        const PotentialOracle h = history(d, t, rng);
        const DerivOracle exact = cum_loss_oracle(h);
        const DerivOracle approx = fd_backed(exact);
        const DensityMatrix rho = interior_density(d, rng);
        const HermitianMatrix u = unit_direction(d, rng);
        const HermitianMatrix v = unit_direction(d, rng);
        agree_vbc += vbc_gap(exact, rho, u, v).passes(kAnalyticSlack) == vbc_gap(approx, rho, u, v).passes(kFdSlack);
        agree_sc += sc_gap(exact, rho, u).passes(kAnalyticSlack) == sc_gap(approx, rho, u).passes(kFdSlack);
      }
      CAPTURE(d);
      CAPTURE(t);
      CHECK(agree_vbc == 100);
      CHECK(agree_sc == 100);
    }
  }

  // the sandwich with fully finite-difference derivatives, on the cheap d = 2 case
  for (int rep = 0; rep < 5; ++rep) {
    const PotentialOracle h = history(2, rep % 2, rng);
    const DensityMatrix rho = interior_density(2, rng);
    const HermitianMatrix u = unit_direction(2, rng);
    const DerivOracle exact = cum_loss_oracle(h);
    CHECK(sandwich_check(exact, rho, u).holds(kFdSlack) == sandwich_check(fd_backed(exact), rho, u).holds(kFdSlack));
  }
}

TEST_CASE("trace inequality") {
  CounterRng rng(109);
  SUBCASE("rank-one equality") {
    const CVector v = random_unit_vector(3, rng);
    const HermitianMatrix a = HermitianMatrix::outer(v);
    const TraceIneqResult r = trace_ineq_gap(a, HermitianMatrix::identity(3), a, rng);
    CHECK(r.hypothesis_verified);
    CHECK(std::abs(r.gap) < 1e-12);
  }
  SUBCASE("C = 0") {
    const HermitianMatrix a = random_psd(3, rng);
    const HermitianMatrix b = random_psd(3, rng) + HermitianMatrix::identity(3) * 0.1;
    const TraceIneqResult r = trace_ineq_gap(a, b, HermitianMatrix::zero(3), rng);
    CHECK(r.hypothesis_verified);
    CHECK(r.gap == doctest::Approx((a.mat() * inverse_pd(b)).trace().real()));
    CHECK(r.gap >= 0.0);
  }
  SUBCASE("constructed instances A = C B^-1 C + slack") {
    for (int rep = 0; rep < 100; ++rep) {
      const int d = 2 + rep % 3;
      const HermitianMatrix b = random_psd(d, rng) + HermitianMatrix::identity(d) * 0.05;
      const HermitianMatrix c = random_hermitian(d, rng);
      const HermitianMatrix a(c.mat() * inverse_pd(b) * c.mat() + random_psd(d, rng, 1).mat() * rng.uniform());
      const TraceIneqResult r = trace_ineq_gap(a, b, c, rng);
      CHECK(r.hypothesis_verified);
      CHECK(r.passes(1e-10));
    }
  }
  SUBCASE("violated premise is reported, not failed") {
    // A = 0 with C != 0 violates <v,Av><v,Bv> >= <v,Cv>^2 for every v with <v,Cv> != 0
    const TraceIneqResult r =
        trace_ineq_gap(HermitianMatrix::zero(2), HermitianMatrix::identity(2), HermitianMatrix::identity(2), rng);
    CHECK_FALSE(r.hypothesis_verified);
  }
  CHECK_THROWS_AS(trace_ineq_gap(HermitianMatrix::identity(2), HermitianMatrix::diagonal({1.0, 0.0}),
                                 HermitianMatrix::zero(2), rng),
                  DomainError);
}

TEST_CASE("Anstreicher trace inequality") {
  CHECK(anstreicher_gap(HermitianMatrix::diagonal({1.0, -2.0, 3.0}), HermitianMatrix::diagonal({0.5, 4.0, -1.0})).gap ==
        doctest::Approx(0.0));
  CounterRng rng(110);
  for (int rep = 0; rep < 100; ++rep) {
    const HermitianMatrix a = random_hermitian(3, rng);
    const HermitianMatrix b = random_hermitian(3, rng);
    const GapResult g = anstreicher_gap(a, b);
    CHECK(g.gap >= -1e-10 * g.scale);
    CHECK(std::abs(anstreicher_gap(a, a).gap) <= 1e-12 * anstreicher_gap(a, a).scale);
  }
}
