#pragma once

// The regularized cumulative loss L_t, its volumetric barrier V_t and the
// learner's potential P_t = L_t + mu V_t, for a fixed history A_1..A_t.

#include "vbftrl/derivatives.hpp"

#include <Eigen/Cholesky>

#include <vector>

namespace vbftrl {

class LocalModel;

/// Immutable bundle of (A_1..A_t, lambda, mu). Evaluation at a state goes
/// through `at(rho)`, which factors the Hessian H_t(rho) once.
class PotentialOracle {
 public:
  PotentialOracle(int d, std::vector<Observable> observables, double lambda, double mu);

  int dim() const noexcept { return d_; }
  int rounds() const noexcept { return static_cast<int>(obs_.size()); }
  double lambda() const noexcept { return lambda_; }
  double mu() const noexcept { return mu_; }
  const std::vector<Observable>& observables() const noexcept { return obs_; }

  PotentialOracle with_observable(const Observable& a) const;
  /// Oracle for t - 1 rounds. Requires rounds() >= 1.
  PotentialOracle without_last() const;
  PotentialOracle with_mu(double mu) const;

  /// Throws DomainError unless rho is PD and every tr(A_tau rho) is in the domain.
  LocalModel at(const HermitianMatrix& rho) const;

 private:
  int d_;
  std::vector<Observable> obs_;
  double lambda_;
  double mu_;
};

/// All derived quantities of a PotentialOracle at one strictly PD state.
class LocalModel {
 public:
  LocalModel(const PotentialOracle& oracle, const HermitianMatrix& rho);

  const HermitianMatrix& rho() const noexcept { return rho_; }
  const CMatrix& rho_inv() const noexcept { return rho_inv_; }
  /// tr(A_tau rho), one per observable
  const std::vector<double>& traces() const noexcept { return traces_; }

  double cum_loss() const;
  /// D^n L_t[V_1..V_n], 1 <= n <= 4
  double cum_loss_dir_deriv(const std::vector<HermitianMatrix>& dirs) const;

  /// H_t(rho) = sum_tau vec(A)vec(A)^*/tr(A rho)^2 + lambda (rho^-1)^T kron rho^-1
  const CMatrix& hessian() const noexcept { return hess_; }
  /// D^3 L_t[U] as a d^2 x d^2 operator (the derivative of H_t along U).
  CMatrix third_op(const HermitianMatrix& u) const;
  /// D^4 L_t[U, V] as a d^2 x d^2 operator.
  CMatrix fourth_op(const HermitianMatrix& u, const HermitianMatrix& v) const;

  /// g^* H^-1 g through the Cholesky factor.
  double dual_norm_sq(const CVector& g) const;
  /// tr(H^-1 M)
  Complex trace_inv_times(const CMatrix& m) const;
  /// H^-1 as a dense matrix (one solve against the identity).
  CMatrix hessian_inverse() const;

  /// V_t = (1/2) log det H_t from the Cholesky factor of H_t.
  double vb() const;
  /// DV_t[U] = (1/2) tr(H^-1 D^3 L_t[U])
  double vb_dir_deriv(const HermitianMatrix& u) const;
  /// D^2 V_t[U, V] = (1/2) tr(H^-1 D^4 L_t[U, V]) - (1/2) tr(H^-1 D^3 L_t[U] H^-1 D^3 L_t[V])
  double vb_second(const HermitianMatrix& u, const HermitianMatrix& v) const;
  /// <u, Q u> = (1/2) tr(H^-1 D^4 L_t[U, U])
  double q_form(const HermitianMatrix& u) const;

  double potential() const;
  /// Closed-form DP_t[U]:
  ///   - sum tr(A U)/tr(A rho) - lambda tr(rho^-1 U)
  ///   - mu sum tr(A U)/tr(A rho)^3 ||vec A||^2_{H^-1}
  ///   - (lambda mu / 2) tr(H^-1 ((rho^-1 U rho^-1)^T kron rho^-1 + (rho^-1)^T kron rho^-1 U rho^-1))
  double potential_dir_deriv(const HermitianMatrix& u) const;
  /// Hermitian G with DP_t[U] = <G, U>_HS for every Hermitian U.
  HermitianMatrix potential_gradient() const;
  double potential_second(const HermitianMatrix& u, const HermitianMatrix& v) const;

  /// pi_t = ||grad f_t||^2_{H^-1} for the last observable. Requires t >= 1.
  double pi() const;

 private:
  double lambda_;
  double mu_;
  HermitianMatrix rho_;
  CMatrix rho_inv_;
  double neg_logdet_rho_;
  std::vector<double> traces_;
  std::vector<CVector> vecs_;  // vec(A_tau)
  CMatrix hess_;
  Eigen::LLT<CMatrix> llt_;
};

// Free-function forms of the oracle operations.
CMatrix cum_hess(const PotentialOracle& oracle, const HermitianMatrix& rho);
double vb_eval(const PotentialOracle& oracle, const HermitianMatrix& rho);
double potential_eval(const PotentialOracle& oracle, const HermitianMatrix& rho);
double potential_dir_deriv(const PotentialOracle& oracle, const HermitianMatrix& rho,
                           const HermitianMatrix& u);
double pi_value(const PotentialOracle& oracle, const HermitianMatrix& rho);

/// ||w_t||_{H_t^-1} with w_t = grad phi_t / tr(A_t rho)^2 and
/// phi_t(rho) = ||vec(A_t)||^2_{H_t(rho)^-1}. The gradient of phi_t is taken by
/// central differences along the full Hermitian chart, so this is a diagnostic.
double w_dual_norm_fd(const PotentialOracle& oracle, const HermitianMatrix& rho);

}  // namespace vbftrl
