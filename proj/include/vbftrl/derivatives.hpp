#pragma once

// Values and directional derivatives of the two building blocks of the
// potential: the log loss f(rho) = -log tr(A rho) and the regularizer
// R(rho) = -log det rho. Matrix-valued derivatives are returned in the complex
// vec representation, i.e. as d^2 x d^2 matrices M with
// D^2 phi[V, W] = vec(V)^* M vec(W).

#include "vbftrl/herm.hpp"

#include <vector>

namespace vbftrl {

/// tr(A rho) at or below this is outside the loss domain.
inline constexpr double kLossDomainTol = 1e-14;

/// Hermitian PSD, nonzero matrix announced by the adversary.
class Observable {
 public:
  explicit Observable(HermitianMatrix a, double tol_psd = kDefaultTolPsd);

  const HermitianMatrix& herm() const noexcept { return a_; }
  operator const HermitianMatrix&() const noexcept { return a_; }  // NOLINT
  const CMatrix& mat() const noexcept { return a_.mat(); }
  int dim() const noexcept { return a_.dim(); }

 private:
  HermitianMatrix a_;
};

/// Re tr(A B), exact for Hermitian A, B.
double trace_product(const HermitianMatrix& a, const HermitianMatrix& b);

double loss_eval(const Observable& a, const HermitianMatrix& rho);
/// D^n f(rho)[V_1..V_n] = (-1)^n (n-1)! prod_i tr(A V_i) / tr(A rho)^n, 1 <= n <= 4.
double loss_dir_deriv(const Observable& a, const HermitianMatrix& rho,
                      const std::vector<HermitianMatrix>& dirs);
/// -vec(A)/tr(A rho)
CVector loss_grad_vec(const Observable& a, const HermitianMatrix& rho);
/// vec(A) vec(A)^* / tr(A rho)^2
CMatrix loss_hess(const Observable& a, const HermitianMatrix& rho);

/// -log det rho, from the eigenvalues. Throws DomainError unless rho is PD.
double logdet_eval(const HermitianMatrix& rho);
/// D^n R(rho)[V_1..V_n] = ((-1)^n / n) sum_{sigma in S_n} tr(rho^-1 V_s(1) ... rho^-1 V_s(n)).
double logdet_dir_deriv(const HermitianMatrix& rho, const std::vector<HermitianMatrix>& dirs);
/// (rho^-1)^T kron rho^-1
CMatrix logdet_hess(const HermitianMatrix& rho);
/// Derivative of logdet_hess along U:
/// -(rho^-1 U rho^-1)^T kron rho^-1 - (rho^-1)^T kron (rho^-1 U rho^-1).
CMatrix logdet_third_op(const HermitianMatrix& rho, const HermitianMatrix& u);
/// Second derivative of logdet_hess along (U, V).
CMatrix logdet_fourth_op(const HermitianMatrix& rho, const HermitianMatrix& u,
                         const HermitianMatrix& v);

/// (1 - alpha) rho + (alpha/d) I, alpha in (0, 1).
DensityMatrix mix_with_uniform(const DensityMatrix& rho, double alpha);

}  // namespace vbftrl
