#include "vbftrl/ellipsoid.hpp"

#include "vbftrl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vbftrl {

std::string to_string(CutKind kind) {
  switch (kind) {
    case CutKind::gradient:
      return "gradient";
    case CutKind::psd_eigvec:
      return "psd-eigvec";
    case CutKind::loss_domain:
      return "loss-domain";
  }
  return "unknown";
}

int default_max_iters(int n, double eps_vol) {
  if (!(eps_vol > 0.0 && eps_vol < 1.0)) throw ConfigError("eps_vol must be in (0, 1)");
  return static_cast<int>(std::ceil((2.0 * n + 2.0) * n * std::log(1.0 / eps_vol)));
}

double default_tol_psd_cut(double lambda, int t, int d) {
  return std::min(1e-9, lambda / (2.0 * (t + lambda * d)));
}

int chart_dim(int d) { return d * d - 1; }

HermitianMatrix chart_point(const RVector& x, const RealChart& chart) {
  const int d = chart.dim();
  if (x.size() != chart_dim(d)) throw std::invalid_argument("chart_point: coordinate length mismatch");
  CMatrix m = CMatrix::Identity(d, d) / static_cast<double>(d);
  for (int k = 0; k < x.size(); ++k) m += x(k) * chart.basis(k + 1).mat();
  return HermitianMatrix(m);
}

RVector chart_coords(const HermitianMatrix& rho, const RealChart& chart) {
  return herm_to_chart(rho, chart).tail(chart_dim(chart.dim()));
}

RVector chart_project(const HermitianMatrix& g, const RealChart& chart) {
  const int n = chart_dim(chart.dim());
  RVector out(n);
  for (int k = 0; k < n; ++k) out(k) = hs_inner(g, chart.basis(k + 1));
  return out;
}

EllipsoidState initial_ellipsoid(int d) {
  if (d < 2) throw std::invalid_argument("initial_ellipsoid: d must be >= 2");
  const int n = chart_dim(d);
  return {RVector::Zero(n), RMatrix::Identity(n, n), 0};
}

namespace {

// log of the volume ratio of one central-cut step in dimension n
double step_log_volume(int n) {
  const double nn = n;
  return 0.5 * (nn * std::log(nn * nn / (nn * nn - 1.0)) + std::log((nn - 1.0) / (nn + 1.0)));
}

}  // namespace

EllipsoidState ellipsoid_step(const EllipsoidState& state, const Cut& cut) {
  const int n = static_cast<int>(state.center.size());
  if (n < 2) throw std::invalid_argument("ellipsoid_step: dimension must be >= 2");
  if (cut.g.size() != n) throw std::invalid_argument("ellipsoid_step: cut dimension mismatch");
  const RVector hg = state.shape * cut.g;
  const double ghg = cut.g.dot(hg);
  if (!(ghg > 0.0)) throw SolverError("ellipsoid_step: g^T H g <= 0 (numeric breakdown)");
  const RVector b = hg / std::sqrt(ghg);
  const double nn = n;

  EllipsoidState next;
  next.center = state.center - b / (nn + 1.0);
  next.shape = (nn * nn / (nn * nn - 1.0)) * (state.shape - (2.0 / (nn + 1.0)) * b * b.transpose());
  next.shape = 0.5 * (next.shape + next.shape.transpose());
  next.iteration = state.iteration + 1;
  return next;
}

Separation separation_oracle(const RVector& x, const PotentialOracle& oracle, const SolverConfig& config) {
  const int d = oracle.dim();
  const RealChart chart(d);
  const HermitianMatrix rho = chart_point(x, chart);
  const double tol_psd = config.tol_psd_cut < 0.0 ? default_tol_psd_cut(oracle.lambda(), oracle.rounds(), d)
                                                  : config.tol_psd_cut;

  Separation out;
  const HermitianEigen eig = eig_herm(rho);
  if (eig.values(0) < tol_psd || !(eig.values(0) > 0.0)) {
    const CVector v = eig.vectors.col(0);
    out.cut = {CutKind::psd_eigvec, -chart_project(HermitianMatrix::outer(v), chart)};
    return out;
  }
  for (const auto& a : oracle.observables()) {
    if (trace_product(a, rho) <= kLossDomainTol) {
      out.cut = {CutKind::loss_domain, -chart_project(a.herm(), chart)};
      return out;
    }
  }

  const LocalModel model = oracle.at(rho);
  out.feasible = true;
  out.value = model.potential();
  out.cut.kind = CutKind::gradient;
  if (config.gradient == GradientMode::closed_form) {
    out.cut.g = chart_project(model.potential_gradient(), chart);
  } else {
    const int n = chart_dim(d);
    out.cut.g.resize(n);
    for (int k = 0; k < n; ++k) out.cut.g(k) = model.potential_dir_deriv(chart.basis(k + 1));
  }
  return out;
}

Separation hindsight_separation(const RVector& x, const std::vector<Observable>& observables, int d) {
  const RealChart chart(d);
  const HermitianMatrix rho = chart_point(x, chart);

  Separation out;
  const HermitianEigen eig = eig_herm(rho);
  if (eig.values(0) < 0.0) {
    const CVector v = eig.vectors.col(0);
    out.cut = {CutKind::psd_eigvec, -chart_project(HermitianMatrix::outer(v), chart)};
    return out;
  }
  CMatrix grad = CMatrix::Zero(d, d);
  double value = 0.0;
  for (const auto& a : observables) {
    const double s = trace_product(a, rho);
    if (s <= kLossDomainTol) {
      out.cut = {CutKind::loss_domain, -chart_project(a.herm(), chart)};
      return out;
    }
    value -= std::log(s);
    grad -= a.mat() / s;
  }
  out.feasible = true;
  out.value = value;
  out.cut = {CutKind::gradient, chart_project(HermitianMatrix(grad), chart)};
  return out;
}

namespace {

SolveResult run_ellipsoid(int d, const std::function<Separation(const RVector&)>& separate,
                          const SolverConfig& config, const EllipsoidObserver& observer) {
  const int n = chart_dim(d);
  const int max_iters = config.max_iters > 0 ? config.max_iters : default_max_iters(n, config.eps_vol);
  const double dv = step_log_volume(n);

  EllipsoidState state = initial_ellipsoid(d);
  RVector best;
  double best_value = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  int feasible = 0;
  double log_vol = 0.0;
  std::string reason = "max_iters";

  int iter = 0;
  for (; iter < max_iters; ++iter) {
    const Separation sep = separate(state.center);
    if (sep.feasible) {
      ++feasible;
      if (sep.value < best_value) {
        best_value = sep.value;
        best = state.center;
      }
      // f(y) >= f(x) + g^T (y - x) >= f(x) - ||g||_shape for every y in E, and E holds the minimizer
      const double ghg = sep.cut.g.dot(state.shape * sep.cut.g);
      if (!(ghg > 0.0) || sep.cut.g.norm() == 0.0) {
        lower = sep.value;
        reason = "stationary";
        break;
      }
      lower = std::max(lower, sep.value - std::sqrt(ghg));
      if (best_value - lower < config.value_tol) {
        reason = "value_gap";
        break;
      }
    } else if (sep.cut.g.norm() == 0.0) {
      throw SolverError("ellipsoid: feasibility cut with zero normal");
    }
    if (observer) observer(state, sep);
    state = ellipsoid_step(state, sep.cut);
    log_vol += dv;
    if (std::sqrt(state.shape.trace()) < config.radius_tol) {
      ++iter;
      reason = "radius";
      break;
    }
  }
  if (feasible == 0 || best.size() == 0) throw SolverError("ellipsoid: no feasible center within the iteration budget");

  const RealChart chart(d);
  const HermitianMatrix point = chart_point(best, chart);
  const HermitianMatrix rho = point * (1.0 / point.trace());
  return {DensityMatrix::from(rho), best_value, iter, lower, log_vol, feasible, reason};
}

}  // namespace

SolveResult minimize_potential(const PotentialOracle& oracle, const SolverConfig& config,
                               const EllipsoidObserver& observer) {
  return run_ellipsoid(
      oracle.dim(), [&](const RVector& x) { return separation_oracle(x, oracle, config); }, config, observer);
}

SolveResult hindsight_optimum(const std::vector<Observable>& observables, int d, const SolverConfig& config,
                              const EllipsoidObserver& observer) {
  if (observables.empty()) throw std::invalid_argument("hindsight_optimum: needs at least one observable");
  return run_ellipsoid(
      d, [&](const RVector& x) { return hindsight_separation(x, observables, d); }, config, observer);
}

}  // namespace vbftrl
