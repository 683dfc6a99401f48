#pragma once

#include "vbftrl/herm.hpp"
#include "vbftrl/random.hpp"

#include <algorithm>
#include <cmath>

namespace vbftrl::testing {

/// |a - b| / max(|a|, |b|, floor)
inline double rel_err(double a, double b, double floor = 1.0) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Random Hermitian direction with unit Frobenius norm.
inline HermitianMatrix unit_direction(int d, CounterRng& rng) {
  const HermitianMatrix u = random_hermitian(d, rng);
  return u * (1.0 / u.frobenius_norm());
}

/// Density matrix bounded away from the boundary (min eigenvalue >= 0.5/d).
inline DensityMatrix interior_density(int d, CounterRng& rng) { return random_density(d, rng, 0.5); }

inline CMatrix random_complex(int rows, int cols, CounterRng& rng) {
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

}  // namespace vbftrl::testing

namespace vbftrl::testing {

/// Density matrix with smallest eigenvalue exactly `min_eig` and a random eigenbasis.
inline DensityMatrix density_with_min_eig(int d, double min_eig, CounterRng& rng) {
  const HermitianEigen basis = eig_herm(random_hermitian(d, rng));
  RVector ev(d);
  ev(0) = min_eig;
  double rest = 0.0;
  for (int i = 1; i < d; ++i) rest += (ev(i) = 0.5 + rng.uniform());
  for (int i = 1; i < d; ++i) ev(i) *= (1.0 - min_eig) / rest;
  const CMatrix m = basis.vectors * ev.cast<Complex>().asDiagonal() * basis.vectors.adjoint();
  return DensityMatrix::from(HermitianMatrix(m));
}

}  // namespace vbftrl::testing
