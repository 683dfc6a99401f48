#pragma once
// Property checkers for VB-convexity, self-concordance, the Hessian sandwich
// of volumetric barriers and two auxiliary trace inequalities. Every checker
// returns the raw gap together with the magnitude of the terms it compares,
// so callers can apply a relative tolerance.

#include "vbftrl/derivatives.hpp"
#include "vbftrl/fd.hpp"
#include "vbftrl/potential.hpp"
#include "vbftrl/random.hpp"

#include <functional>
#include <string>
#include <vector>

namespace vbftrl {

using DirDerivFunction =
    std::function<double(const HermitianMatrix&, const std::vector<HermitianMatrix>&)>;

/// A C^4 function on Hermitian d x d matrices with directional derivatives of
/// orders 1 to 4 (symmetric multilinear in the directions).
struct DerivOracle {
  std::string name;
  int dim = 1;
  HermFunction value;
  DirDerivFunction dir_deriv;
};

// Analytic oracles.
DerivOracle neg_log_scalar_oracle();                         // -log x, d = 1
DerivOracle quadratic_oracle(int d);                         // tr(x^2)
DerivOracle loss_oracle(const Observable& a);                // -log tr(A x)
DerivOracle logdet_oracle(int d, double scale = 1.0);        // -scale log det x
DerivOracle cum_loss_oracle(const PotentialOracle& history);  // L_t = sum f + lambda R
DerivOracle weighted_sum(const DerivOracle& a, double alpha, const DerivOracle& b, double beta);

/// Same value function, derivatives by central finite differences.
DerivOracle fd_backed(const DerivOracle& analytic);

/// Signed gap plus the magnitude of the compared terms.
struct GapResult {
  double gap = 0.0;
  double scale = 0.0;
  bool passes(double rel_tol) const { return gap >= -rel_tol * std::max(scale, 1e-300); }
};

/// D^4 phi[u,u,v,v] D^2 phi[v,v] - (3/2) (D^3 phi[u,v,v])^2
GapResult vbc_gap(const DerivOracle& phi, const HermitianMatrix& x, const HermitianMatrix& u,
                  const HermitianMatrix& v);

/// vbc_gap of alpha phi1 + beta phi2. Requires alpha, beta > 0.
GapResult vbc_sum_check(const DerivOracle& phi1, const DerivOracle& phi2, double alpha, double beta,
                        const HermitianMatrix& x, const HermitianMatrix& u, const HermitianMatrix& v);

/// 2 M (D^2 phi[u,u])^{3/2} - |D^3 phi[u,u,u]|. Throws DomainError if D^2 phi[u,u] < 0.
GapResult sc_gap(const DerivOracle& phi, const HermitianMatrix& x, const HermitianMatrix& u,
                 double m_f = 1.0);

struct SandwichResult {
  double lower = 0.0;  // <u,Qu>/3
  double mid = 0.0;    // D^2 VB_phi[u,u]
  double upper = 0.0;  // <u,Qu>
  bool holds(double rel_slack) const;
};

/// Hessian and fourth-derivative matrices are assembled in the real chart
/// basis from dir_deriv; the middle term is a finite difference of
/// (1/2) log det of the chart Hessian. Throws DomainError if the Hessian is not PD.
SandwichResult sandwich_check(const DerivOracle& phi, const HermitianMatrix& x, const HermitianMatrix& u);

/// Real symmetric chart Hessian [D^2 phi[b_i, b_j]].
RMatrix chart_hessian(const DerivOracle& phi, const HermitianMatrix& x);

struct TraceIneqResult {
  double gap = 0.0;
  double scale = 0.0;
  bool hypothesis_verified = false;  // no sampled v violated <v,Av><v,Bv> >= <v,Cv>^2
  bool passes(double abs_tol) const { return gap >= -abs_tol * std::max(1.0, scale); }
};

inline constexpr int kTraceIneqSamples = 200;

/// tr(A B^-1) - tr(B^-1 C B^-1 C). The premise is sampled over
/// kTraceIneqSamples random unit vectors drawn from `rng`.
/// Throws DomainError if B is not positive definite.
TraceIneqResult trace_ineq_gap(const HermitianMatrix& a, const HermitianMatrix& b, const HermitianMatrix& c,
                               CounterRng& rng);

/// tr(A^2 B^2) - tr(ABAB)
GapResult anstreicher_gap(const HermitianMatrix& a, const HermitianMatrix& b);

}  // namespace vbftrl
