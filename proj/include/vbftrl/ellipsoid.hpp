#pragma once
// Central-cut ellipsoid method over the density matrices, run in the
// (d^2 - 1)-dimensional traceless chart anchored at I/d:
//   rho(x) = I/d + sum_k x_k B_k,   B_1..B_n the traceless RealChart basis.
// Every density matrix satisfies ||rho - I/d||_F <= sqrt(1 - 1/d) < 1, so the
// unit ball is a valid initial ellipsoid.

#include "vbftrl/potential.hpp"

#include <functional>
#include <string>
#include <vector>

namespace vbftrl {

enum class CutKind { gradient, psd_eigvec, loss_domain };
std::string to_string(CutKind kind);

struct Cut {
  CutKind kind = CutKind::gradient;
  RVector g;
};

/// E = {x : (x - center)^T shape^-1 (x - center) <= 1}
struct EllipsoidState {
  RVector center;
  RMatrix shape;
  int iteration = 0;
};

enum class GradientMode {
  closed_form,  // <Gamma, B_k> from LocalModel::potential_gradient
  directional,  // n calls to potential_dir_deriv along the basis
};

struct SolverConfig {
  int max_iters = 0;           // 0 selects ceil((2n+2) n ln(1/eps_vol))
  double eps_vol = 1e-8;       // target geometric-mean radius factor
  double tol_psd_cut = -1.0;   // < 0 selects min(1e-9, lambda / (2 (t + lambda d)))
  double value_tol = 1e-10;    // stop once best value - certified lower bound < value_tol
  double radius_tol = 1e-14;   // stop once sqrt(tr shape) < radius_tol
  bool best_point_required = true;
  GradientMode gradient = GradientMode::closed_form;
};

/// Default iteration budget for chart dimension n.
int default_max_iters(int n, double eps_vol);
/// min(1e-9, lambda / (2 (t + lambda d)))
double default_tol_psd_cut(double lambda, int t, int d);

/// Chart helpers (traceless coordinates relative to I/d).
int chart_dim(int d);
HermitianMatrix chart_point(const RVector& x, const RealChart& chart);
RVector chart_coords(const HermitianMatrix& rho, const RealChart& chart);
/// <G, B_k> for k = 1..n: the chart projection of a Hermitian matrix.
RVector chart_project(const HermitianMatrix& g, const RealChart& chart);

EllipsoidState initial_ellipsoid(int d);

/// Central-cut update with ambient dimension n = center.size().
/// Throws SolverError if g^T shape g <= 0.
EllipsoidState ellipsoid_step(const EllipsoidState& state, const Cut& cut);

/// Outcome of querying a center: a feasibility cut, or a gradient cut with the
/// objective value when the center is feasible.
struct Separation {
  Cut cut;
  bool feasible = false;
  double value = 0.0;
};

/// Separation oracle for P_t = L_t + mu V_t over the density matrices.
Separation separation_oracle(const RVector& x, const PotentialOracle& oracle, const SolverConfig& config);

/// Called once per iteration with the ellipsoid before the update and the cut applied.
using EllipsoidObserver = std::function<void(const EllipsoidState&, const Separation&)>;

struct SolveResult {
  DensityMatrix rho = DensityMatrix::maximally_mixed(1);
  double value = 0.0;
  int iters = 0;
  double lower_bound = 0.0;       // certified: value - lower_bound bounds the suboptimality
  double log_volume_ratio = 0.0;  // log vol(E_K) / vol(E_1)
  int feasible_centers = 0;
  std::string stop_reason;
};

/// argmin P_t over the density matrices. Throws SolverError if no feasible center is found.
SolveResult minimize_potential(const PotentialOracle& oracle, const SolverConfig& config = {},
                               const EllipsoidObserver& observer = {});

/// Separation oracle for the unregularized sum of losses: PSD cuts at
/// eigenvalues below 0, loss-domain cuts, gradient -sum A / tr(A rho).
Separation hindsight_separation(const RVector& x, const std::vector<Observable>& observables, int d);

/// argmin of sum_tau f_tau over the density matrices (the regret comparator).
SolveResult hindsight_optimum(const std::vector<Observable>& observables, int d, const SolverConfig& config = {},
                              const EllipsoidObserver& observer = {});

}  // namespace vbftrl
