#include "vbftrl/potential.hpp"

#include "vbftrl/errors.hpp"
#include "vbftrl/fd.hpp"

#include <cmath>
#include <stdexcept>

namespace vbftrl {

PotentialOracle::PotentialOracle(int d, std::vector<Observable> observables, double lambda, double mu)
    : d_(d), obs_(std::move(observables)), lambda_(lambda), mu_(mu) {
  if (d < 1) throw std::invalid_argument("PotentialOracle: dimension must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("PotentialOracle: lambda must be > 0");
  if (!(mu >= 0.0)) throw std::invalid_argument("PotentialOracle: mu must be >= 0");
  for (const auto& a : obs_) {
    if (a.dim() != d) throw std::invalid_argument("PotentialOracle: observable dimension mismatch");
  }
}

PotentialOracle PotentialOracle::with_observable(const Observable& a) const {
  auto obs = obs_;
  obs.push_back(a);
  return {d_, std::move(obs), lambda_, mu_};
}

PotentialOracle PotentialOracle::without_last() const {
  if (obs_.empty()) throw std::logic_error("PotentialOracle::without_last on an empty history");
  return {d_, std::vector<Observable>(obs_.begin(), obs_.end() - 1), lambda_, mu_};
}

PotentialOracle PotentialOracle::with_mu(double mu) const { return {d_, obs_, lambda_, mu}; }

LocalModel PotentialOracle::at(const HermitianMatrix& rho) const { return {*this, rho}; }

LocalModel::LocalModel(const PotentialOracle& oracle, const HermitianMatrix& rho)
    : lambda_(oracle.lambda()), mu_(oracle.mu()), rho_(rho) {
  if (rho.dim() != oracle.dim()) throw std::invalid_argument("LocalModel: state dimension mismatch");
  const auto eig = eig_herm(rho);
  if (!(eig.values(0) > 0.0)) throw DomainError("LocalModel: state is not positive definite");
  rho_inv_ = eig.vectors * eig.values.cwiseInverse().asDiagonal() * eig.vectors.adjoint();
  neg_logdet_rho_ = -eig.values.array().log().sum();

  hess_ = lambda_ * kron(rho_inv_.transpose(), rho_inv_);
  traces_.reserve(oracle.observables().size());
  vecs_.reserve(oracle.observables().size());
  for (const auto& a : oracle.observables()) {
    const double s = trace_product(a, rho);
    if (!(s > kLossDomainTol)) throw DomainError("LocalModel: tr(A rho) is outside the loss domain");
    traces_.push_back(s);
    vecs_.push_back(vec(a.herm()));
    hess_.noalias() += (vecs_.back() * vecs_.back().adjoint()) / (s * s);
  }
  llt_.compute(hess_);
  if (llt_.info() != Eigen::Success) throw SolverError("LocalModel: Hessian is not positive definite");
}

namespace {

// vec(A)^* vec(U) = tr(A U) for Hermitian A, U
double tr_with(const CVector& a, const HermitianMatrix& u) {
  return a.dot(vec(u.mat())).real();
}

}  // namespace

double LocalModel::cum_loss() const {
  double sum = lambda_ * neg_logdet_rho_;
  for (double s : traces_) sum -= std::log(s);
  return sum;
}

double LocalModel::cum_loss_dir_deriv(const std::vector<HermitianMatrix>& dirs) const {
  const std::size_t n = dirs.size();
  if (n < 1 || n > 4) throw std::invalid_argument("cum_loss_dir_deriv: order must be in [1, 4]");
  static constexpr double kFact[] = {1.0, 1.0, 2.0, 6.0};
  const double coef = (n % 2 == 0 ? 1.0 : -1.0) * kFact[n - 1];
  double sum = 0.0;
  for (std::size_t k = 0; k < traces_.size(); ++k) {
    double prod = 1.0;
    for (const auto& v : dirs) prod *= tr_with(vecs_[k], v) / traces_[k];
    sum += coef * prod;
  }
  return sum + lambda_ * logdet_dir_deriv(rho_, dirs);
}

CMatrix LocalModel::third_op(const HermitianMatrix& u) const {
  const CMatrix xu = rho_inv_ * u.mat() * rho_inv_;
  CMatrix out = -lambda_ * (kron(xu.transpose(), rho_inv_) + kron(rho_inv_.transpose(), xu));
  for (std::size_t k = 0; k < traces_.size(); ++k) {
    const double s = traces_[k];
    out.noalias() += (-2.0 * tr_with(vecs_[k], u) / (s * s * s)) * (vecs_[k] * vecs_[k].adjoint());
  }
  return out;
}

CMatrix LocalModel::fourth_op(const HermitianMatrix& u, const HermitianMatrix& v) const {
  const CMatrix& x = rho_inv_;
  const CMatrix xu = x * u.mat() * x;
  const CMatrix xv = x * v.mat() * x;
  const CMatrix n = xu * v.mat() * x + xv * u.mat() * x;
  CMatrix out = lambda_ * (kron(n.transpose(), x) + kron(x.transpose(), n) + kron(xu.transpose(), xv) +
                           kron(xv.transpose(), xu));
  for (std::size_t k = 0; k < traces_.size(); ++k) {
    const double s = traces_[k];
    const double c = 6.0 * tr_with(vecs_[k], u) * tr_with(vecs_[k], v) / (s * s * s * s);
    out.noalias() += c * (vecs_[k] * vecs_[k].adjoint());
  }
  return out;
}

double LocalModel::dual_norm_sq(const CVector& g) const { return g.dot(llt_.solve(g)).real(); }

Complex LocalModel::trace_inv_times(const CMatrix& m) const { return llt_.solve(m).trace(); }

CMatrix LocalModel::hessian_inverse() const {
  return llt_.solve(CMatrix::Identity(hess_.rows(), hess_.cols()));
}

double LocalModel::vb() const {
  // (1/2) log det H = sum log L_ii for the Cholesky factor H = L L^*
  return llt_.matrixLLT().diagonal().real().array().log().sum();
}

double LocalModel::vb_dir_deriv(const HermitianMatrix& u) const {
  return 0.5 * trace_inv_times(third_op(u)).real();
}

double LocalModel::vb_second(const HermitianMatrix& u, const HermitianMatrix& v) const {
  const CMatrix tu = llt_.solve(third_op(u));
  const CMatrix tv = (u.mat() - v.mat()).norm() == 0.0 ? tu : CMatrix(llt_.solve(third_op(v)));
  return 0.5 * trace_inv_times(fourth_op(u, v)).real() - 0.5 * (tu * tv).trace().real();
}

double LocalModel::q_form(const HermitianMatrix& u) const {
  return 0.5 * trace_inv_times(fourth_op(u, u)).real();
}

double LocalModel::potential() const {
  return mu_ == 0.0 ? cum_loss() : cum_loss() + mu_ * vb();
}

double LocalModel::potential_dir_deriv(const HermitianMatrix& u) const {
  double loss_part = -lambda_ * (rho_inv_ * u.mat()).trace().real();
  double vb_part = 0.0;
  for (std::size_t k = 0; k < traces_.size(); ++k) {
    const double s = traces_[k];
    const double tau = tr_with(vecs_[k], u);
    loss_part -= tau / s;
    if (mu_ != 0.0) vb_part -= mu_ * tau / (s * s * s) * dual_norm_sq(vecs_[k]);
  }
  if (mu_ == 0.0) return loss_part;
  const CMatrix xu = rho_inv_ * u.mat() * rho_inv_;
  const CMatrix k = kron(xu.transpose(), rho_inv_) + kron(rho_inv_.transpose(), xu);
  vb_part -= 0.5 * lambda_ * mu_ * trace_inv_times(k).real();
  return loss_part + vb_part;
}

HermitianMatrix LocalModel::potential_gradient() const {
  const int d = rho_.dim();
  const CMatrix& x = rho_inv_;
  CMatrix grad = -lambda_ * x;
  std::vector<double> weights(traces_.size(), 0.0);
  if (mu_ != 0.0) {
    const CMatrix g = hessian_inverse();
    for (std::size_t k = 0; k < traces_.size(); ++k) weights[k] = vecs_[k].dot(g * vecs_[k]).real();

    // tr(G (Z^T kron X)) + tr(G (X^T kron Z)) = sum_ij phi_ij Z_ij, linear in Z = X U X.
    CMatrix phi = CMatrix::Zero(d, d);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        for (int c = 0; c < d; ++c) {
          for (int e = 0; e < d; ++e) {
            const Complex gv = g(c * d + e, a * d + b);
            phi(c, a) += gv * x(b, e);
            phi(b, e) += gv * x(c, a);
          }
        }
      }
    }
    const CMatrix m = x * phi.transpose() * x;
    grad -= 0.5 * lambda_ * mu_ * 0.5 * (m + m.adjoint());
  }
  for (std::size_t k = 0; k < traces_.size(); ++k) {
    const double s = traces_[k];
    const double c = -1.0 / s - mu_ * weights[k] / (s * s * s);
    // vec_k holds vec(A_k); rebuild A_k column-major
    grad += c * Eigen::Map<const CMatrix>(vecs_[k].data(), d, d);
  }
  return HermitianMatrix(grad);
}

double LocalModel::potential_second(const HermitianMatrix& u, const HermitianMatrix& v) const {
  const double l2 = cum_loss_dir_deriv({u, v});
  return mu_ == 0.0 ? l2 : l2 + mu_ * vb_second(u, v);
}

double LocalModel::pi() const {
  if (traces_.empty()) throw std::logic_error("pi: no observable in the history");
  const CVector g = -vecs_.back() / traces_.back();
  return dual_norm_sq(g);
}

CMatrix cum_hess(const PotentialOracle& oracle, const HermitianMatrix& rho) {
  return oracle.at(rho).hessian();
}

double vb_eval(const PotentialOracle& oracle, const HermitianMatrix& rho) { return oracle.at(rho).vb(); }

double potential_eval(const PotentialOracle& oracle, const HermitianMatrix& rho) {
  return oracle.at(rho).potential();
}

double potential_dir_deriv(const PotentialOracle& oracle, const HermitianMatrix& rho,
                           const HermitianMatrix& u) {
  return oracle.at(rho).potential_dir_deriv(u);
}

double pi_value(const PotentialOracle& oracle, const HermitianMatrix& rho) { return oracle.at(rho).pi(); }

double w_dual_norm_fd(const PotentialOracle& oracle, const HermitianMatrix& rho) {
  if (oracle.rounds() < 1) throw std::logic_error("w_dual_norm_fd: no observable in the history");
  const Observable& last = oracle.observables().back();
  const CVector a = vec(last.herm());
  const HermFunction phi = [&](const HermitianMatrix& x) { return oracle.at(x).dual_norm_sq(a); };

  const RealChart chart(rho.dim());
  CMatrix w = CMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& b : chart.basis()) w += fd_dir_deriv(phi, rho, {b}) * b.mat();
  const double s = trace_product(last, rho);
  w /= s * s;
  return std::sqrt(oracle.at(rho).dual_norm_sq(vec(w)));
}

}  // namespace vbftrl
