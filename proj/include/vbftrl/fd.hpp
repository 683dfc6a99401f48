#pragma once

// Central finite differences for Gateaux derivatives of scalar functions on
// Hermitian matrices. Order-n mixed derivatives use the 2^n-point stencil
//   sum_{s in {-1,1}^n} (prod s_i) f(x + h sum_i s_i V_i) / (2h)^n,
// extrapolated once (Richardson, steps h and h/2) so the error is O(h^4).

#include "vbftrl/herm.hpp"

#include <functional>
#include <vector>

namespace vbftrl {

using HermFunction = std::function<double(const HermitianMatrix&)>;

/// 1e-5 (1 + ||x||_F) for order 1, 1e-3 (1 + ||x||_F) for orders 2 and 3,
/// 3e-3 (1 + ||x||_F) for order 4.
double fd_default_step(int order, const HermitianMatrix& x);

/// Throws DomainError when a stencil point leaves the domain of `f`.
double fd_dir_deriv(const HermFunction& f, const HermitianMatrix& x,
                    const std::vector<HermitianMatrix>& dirs, double h);
inline double fd_dir_deriv(const HermFunction& f, const HermitianMatrix& x,
                           const std::vector<HermitianMatrix>& dirs) {
  return fd_dir_deriv(f, x, dirs, fd_default_step(static_cast<int>(dirs.size()), x));
}

}  // namespace vbftrl
