#include "vbftrl/derivatives.hpp"

#include "vbftrl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace vbftrl {

namespace {

void check_order(std::size_t n) {
  if (n < 1 || n > 4) {
    throw std::invalid_argument("directional derivative order must be in [1, 4], got " +
                                std::to_string(n));
  }
}

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return f;
}

double domain_trace(const Observable& a, const HermitianMatrix& rho) {
  if (a.dim() != rho.dim()) throw std::invalid_argument("observable/state dimension mismatch");
  const double s = trace_product(a, rho);
  if (!(s > kLossDomainTol)) throw DomainError("loss: tr(A rho) is outside the domain");
  return s;
}

}  // namespace

Observable::Observable(HermitianMatrix a, double tol_psd) : a_(std::move(a)) {
  if (a_.mat().cwiseAbs().maxCoeff() == 0.0) throw DomainError("Observable: zero matrix");
  if (eig_herm(a_).values(0) < -tol_psd) throw DomainError("Observable: matrix is not PSD");
}

double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B
  return (a.mat().cwiseProduct(b.mat().conjugate())).sum().real();
}

double loss_eval(const Observable& a, const HermitianMatrix& rho) {
  return -std::log(domain_trace(a, rho));
}

double loss_dir_deriv(const Observable& a, const HermitianMatrix& rho,
                      const std::vector<HermitianMatrix>& dirs) {
  check_order(dirs.size());
  const double s = domain_trace(a, rho);
  double prod = 1.0;
  for (const auto& v : dirs) prod *= trace_product(a, v) / s;
  const double sign = dirs.size() % 2 == 0 ? 1.0 : -1.0;
  return sign * factorial(dirs.size() - 1) * prod;
}

CVector loss_grad_vec(const Observable& a, const HermitianMatrix& rho) {
  return -vec(a.herm()) / domain_trace(a, rho);
}

CMatrix loss_hess(const Observable& a, const HermitianMatrix& rho) {
  const CVector g = loss_grad_vec(a, rho);
  return g * g.adjoint();
}

double logdet_eval(const HermitianMatrix& rho) {
  const RVector ev = eig_herm(rho).values;
  if (!(ev(0) > 0.0)) throw DomainError("logdet: matrix is not positive definite");
  return -ev.array().log().sum();
}

double logdet_dir_deriv(const HermitianMatrix& rho, const std::vector<HermitianMatrix>& dirs) {
  check_order(dirs.size());
  const CMatrix inv = inverse_pd(rho);
  std::vector<CMatrix> w;
  w.reserve(dirs.size());
  for (const auto& v : dirs) w.push_back(inv * v.mat());

  std::vector<std::size_t> perm(dirs.size());
  std::iota(perm.begin(), perm.end(), 0);
  Complex sum = 0.0;
  do {
    CMatrix prod = w[perm[0]];
    for (std::size_t k = 1; k < perm.size(); ++k) prod = prod * w[perm[k]];
    sum += prod.trace();
  } while (std::next_permutation(perm.begin(), perm.end()));

  const double n = static_cast<double>(dirs.size());
  const double sign = dirs.size() % 2 == 0 ? 1.0 : -1.0;
  return sign / n * sum.real();
}

CMatrix logdet_hess(const HermitianMatrix& rho) {
  const CMatrix inv = inverse_pd(rho);
  return kron(inv.transpose(), inv);
}

CMatrix logdet_third_op(const HermitianMatrix& rho, const HermitianMatrix& u) {
  const CMatrix inv = inverse_pd(rho);
  const CMatrix xu = inv * u.mat() * inv;
  return -kron(xu.transpose(), inv) - kron(inv.transpose(), xu);
}

CMatrix logdet_fourth_op(const HermitianMatrix& rho, const HermitianMatrix& u,
                         const HermitianMatrix& v) {
  const CMatrix x = inverse_pd(rho);
  const CMatrix xu = x * u.mat() * x;
  const CMatrix xv = x * v.mat() * x;
  const CMatrix n = xu * v.mat() * x + xv * u.mat() * x;
  return kron(n.transpose(), x) + kron(x.transpose(), n) + kron(xu.transpose(), xv) +
         kron(xv.transpose(), xu);
}

DensityMatrix mix_with_uniform(const DensityMatrix& rho, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("mix_with_uniform: alpha must lie in (0, 1)");
  const int d = rho.dim();
  return DensityMatrix::from(rho.herm() * (1.0 - alpha) + HermitianMatrix::identity(d) * (alpha / d));
}

}  // namespace vbftrl
