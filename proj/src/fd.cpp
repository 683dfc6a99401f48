#include "vbftrl/fd.hpp"

#include "vbftrl/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace vbftrl {

namespace {

double stencil(const HermFunction& f, const HermitianMatrix& x,
               const std::vector<HermitianMatrix>& dirs, double h) {
  const std::size_t n = dirs.size();
  double acc = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    CMatrix p = x.mat();
    int sign = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        p -= h * dirs[i].mat();
        sign = -sign;
      } else {
        p += h * dirs[i].mat();
      }
    }
    double value = 0.0;
    try {
      value = f(HermitianMatrix(p));
    } catch (const DomainError& e) {
      throw DomainError(std::string("fd_dir_deriv: stencil point outside the domain: ") + e.what());
    }
    acc += sign * value;
  }
  return acc / std::pow(2.0 * h, static_cast<double>(n));
}

}  // namespace

double fd_default_step(int order, const HermitianMatrix& x) {
  // order 4 divides by (2h)^4 twice over (Richardson halves h), so it needs a wider step to keep
  // cancellation noise below the truncation error
  const double base = order <= 1 ? 1e-5 : order <= 3 ? 1e-3 : 3e-3;
  return base * (1.0 + x.frobenius_norm());
}

double fd_dir_deriv(const HermFunction& f, const HermitianMatrix& x,
                    const std::vector<HermitianMatrix>& dirs, double h) {
  if (dirs.empty() || dirs.size() > 4) throw std::invalid_argument("fd_dir_deriv: order must be in [1, 4]");
  if (!(h > 0.0)) throw std::invalid_argument("fd_dir_deriv: step must be positive");
  const double coarse = stencil(f, x, dirs, h);
  const double fine = stencil(f, x, dirs, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace vbftrl
