#include "vbftrl/vbc.hpp"

#include "vbftrl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vbftrl {

namespace {

void require_order(const std::vector<HermitianMatrix>& dirs) {
  if (dirs.empty() || dirs.size() > 4) throw std::invalid_argument("dir_deriv: order must be in [1, 4]");
}

double scalar_of(const HermitianMatrix& x) {
  if (x.dim() != 1) throw std::invalid_argument("neg_log_scalar_oracle: expects a 1 x 1 argument");
  return x(0, 0).real();
}

}  // namespace

DerivOracle neg_log_scalar_oracle() {
  DerivOracle o;
  o.name = "neg_log_scalar";
  o.dim = 1;
  o.value = [](const HermitianMatrix& x) {
    const double s = scalar_of(x);
    if (!(s > 0.0)) throw DomainError("-log x: argument must be positive");
    return -std::log(s);
  };
  o.dir_deriv = [](const HermitianMatrix& x, const std::vector<HermitianMatrix>& dirs) {
    require_order(dirs);
    const double s = scalar_of(x);
    if (!(s > 0.0)) throw DomainError("-log x: argument must be positive");
    static constexpr double kFact[] = {1.0, 1.0, 2.0, 6.0};
    const std::size_t n = dirs.size();
    double prod = (n % 2 == 0 ? 1.0 : -1.0) * kFact[n - 1];
    for (const auto& u : dirs) prod *= scalar_of(u) / s;
    return prod;
  };
  return o;
}

DerivOracle quadratic_oracle(int d) {
  DerivOracle o;
  o.name = "quadratic";
  o.dim = d;
  o.value = [](const HermitianMatrix& x) { return hs_inner(x, x); };
  o.dir_deriv = [](const HermitianMatrix& x, const std::vector<HermitianMatrix>& dirs) {
    require_order(dirs);
    if (dirs.size() == 1) return 2.0 * hs_inner(x, dirs[0]);
    if (dirs.size() == 2) return 2.0 * hs_inner(dirs[0], dirs[1]);
    return 0.0;
  };
  return o;
}

DerivOracle loss_oracle(const Observable& a) {
  DerivOracle o;
  o.name = "loss";
  o.dim = a.dim();
  o.value = [a](const HermitianMatrix& x) { return loss_eval(a, x); };
  o.dir_deriv = [a](const HermitianMatrix& x, const std::vector<HermitianMatrix>& dirs) {
    return loss_dir_deriv(a, x, dirs);
  };
  return o;
}

DerivOracle logdet_oracle(int d, double scale) {
  DerivOracle o;
  o.name = "logdet";
  o.dim = d;
  o.value = [scale](const HermitianMatrix& x) { return scale * logdet_eval(x); };
  o.dir_deriv = [scale](const HermitianMatrix& x, const std::vector<HermitianMatrix>& dirs) {
    return scale * logdet_dir_deriv(x, dirs);
  };
  return o;
}

DerivOracle cum_loss_oracle(const PotentialOracle& history) {
  DerivOracle o;
  o.name = "cum_loss";
  o.dim = history.dim();
  o.value = [history](const HermitianMatrix& x) {
    double sum = history.lambda() * logdet_eval(x);
    for (const auto& a : history.observables()) sum += loss_eval(a, x);
    return sum;
  };
  o.dir_deriv = [history](const HermitianMatrix& x, const std::vector<HermitianMatrix>& dirs) {
    double sum = history.lambda() * logdet_dir_deriv(x, dirs);
    for (const auto& a : history.observables()) sum += loss_dir_deriv(a, x, dirs);
    return sum;
  };
  return o;
}

DerivOracle weighted_sum(const DerivOracle& a, double alpha, const DerivOracle& b, double beta) {
  if (a.dim != b.dim) throw std::invalid_argument("weighted_sum: dimension mismatch");
  DerivOracle o;
  o.name = a.name + "+" + b.name;
  o.dim = a.dim;
  o.value = [a, b, alpha, beta](const HermitianMatrix& x) { return alpha * a.value(x) + beta * b.value(x); };
  o.dir_deriv = [a, b, alpha, beta](const HermitianMatrix& x, const std::vector<HermitianMatrix>& dirs) {
    return alpha * a.dir_deriv(x, dirs) + beta * b.dir_deriv(x, dirs);
  };
  return o;
}

DerivOracle fd_backed(const DerivOracle& analytic) {
  DerivOracle o;
  o.name = analytic.name + "[fd]";
  o.dim = analytic.dim;
  o.value = analytic.value;
  const HermFunction f = analytic.value;
  o.dir_deriv = [f](const HermitianMatrix& x, const std::vector<HermitianMatrix>& dirs) {
    return fd_dir_deriv(f, x, dirs);
  };
  return o;
}

GapResult vbc_gap(const DerivOracle& phi, const HermitianMatrix& x, const HermitianMatrix& u,
                  const HermitianMatrix& v) {
  const double d4 = phi.dir_deriv(x, {u, u, v, v});
  const double d2 = phi.dir_deriv(x, {v, v});
  const double d3 = phi.dir_deriv(x, {u, v, v});
  const double lhs = d4 * d2;
  const double rhs = 1.5 * d3 * d3;
  return {lhs - rhs, std::abs(lhs) + std::abs(rhs)};
}

GapResult vbc_sum_check(const DerivOracle& phi1, const DerivOracle& phi2, double alpha, double beta,
                        const HermitianMatrix& x, const HermitianMatrix& u, const HermitianMatrix& v) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("vbc_sum_check: weights must be > 0");
  return vbc_gap(weighted_sum(phi1, alpha, phi2, beta), x, u, v);
}

GapResult sc_gap(const DerivOracle& phi, const HermitianMatrix& x, const HermitianMatrix& u, double m_f) {
  const double d2 = phi.dir_deriv(x, {u, u});
  if (d2 < 0.0) throw DomainError("sc_gap: negative second derivative, function is not convex here");
  const double d3 = std::abs(phi.dir_deriv(x, {u, u, u}));
  const double lhs = 2.0 * m_f * std::pow(d2, 1.5);
  return {lhs - d3, lhs + d3};
}

RMatrix chart_hessian(const DerivOracle& phi, const HermitianMatrix& x) {
  const RealChart chart(x.dim());
  const int n = chart.real_dim();
  RMatrix h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      h(i, j) = phi.dir_deriv(x, {chart.basis(i), chart.basis(j)});
      h(j, i) = h(i, j);
    }
  }
  return h;
}

bool SandwichResult::holds(double rel_slack) const {
  const double s = rel_slack * std::max({std::abs(lower), std::abs(mid), std::abs(upper)});
  return lower <= mid + s && mid <= upper + s;
}

SandwichResult sandwich_check(const DerivOracle& phi, const HermitianMatrix& x, const HermitianMatrix& u) {
  const RealChart chart(x.dim());
  const int n = chart.real_dim();

  const RMatrix h = chart_hessian(phi, x);
  Eigen::LLT<RMatrix> llt(h);
  if (llt.info() != Eigen::Success) throw DomainError("sandwich_check: Hessian is not positive definite");
  RMatrix d4(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      d4(i, j) = phi.dir_deriv(x, {u, u, chart.basis(i), chart.basis(j)});
      d4(j, i) = d4(i, j);
    }
  }
  const double q = 0.5 * llt.solve(d4).trace();

  const HermFunction vb = [&](const HermitianMatrix& y) {
    const RVector ev = Eigen::SelfAdjointEigenSolver<RMatrix>(chart_hessian(phi, y), Eigen::EigenvaluesOnly)
                           .eigenvalues();
    if (!(ev(0) > 0.0)) throw DomainError("sandwich_check: Hessian is not positive definite");
    return 0.5 * ev.array().log().sum();
  };
  const double mid = fd_dir_deriv(vb, x, {u, u});
  return {q / 3.0, mid, q};
}

TraceIneqResult trace_ineq_gap(const HermitianMatrix& a, const HermitianMatrix& b, const HermitianMatrix& c,
                               CounterRng& rng) {
  const int d = a.dim();
  if (b.dim() != d || c.dim() != d) throw std::invalid_argument("trace_ineq_gap: dimension mismatch");
  const CMatrix b_inv = inverse_pd(b);

  bool verified = true;
  for (int k = 0; k < kTraceIneqSamples; ++k) {
    const CVector v = random_unit_vector(d, rng);
    const double va = v.dot(a.mat() * v).real();
    const double vb = v.dot(b.mat() * v).real();
    const double vc = v.dot(c.mat() * v).real();
    const double lhs = va * vb;
    const double rhs = vc * vc;
    if (lhs < rhs - 1e-12 * std::max({1.0, std::abs(lhs), rhs})) {
      verified = false;
      break;
    }
  }

  const double t1 = (a.mat() * b_inv).trace().real();
  const CMatrix bc = b_inv * c.mat();
  const double t2 = (bc * bc).trace().real();
  return {t1 - t2, std::abs(t1) + std::abs(t2), verified};
}

GapResult anstreicher_gap(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("anstreicher_gap: dimension mismatch");
  const CMatrix ab = a.mat() * b.mat();
  const double t1 = (a.mat() * a.mat() * b.mat() * b.mat()).trace().real();
  const double t2 = (ab * ab).trace().real();
  return {t1 - t2, std::abs(t1) + std::abs(t2)};
}

}  // namespace vbftrl
