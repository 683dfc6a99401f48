#include "vbftrl/random.hpp"

#include <cmath>
#include <numbers>

namespace vbftrl {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(seed ^ splitmix64(stream)) {}

std::uint64_t CounterRng::next_u64() noexcept {
  ++counter_;
  return splitmix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  return r * std::cos(theta);
}

Complex CounterRng::complex_normal() noexcept {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 * 0.5, im * std::numbers::sqrt2 * 0.5};
}

CVector random_unit_vector(int d, CounterRng& rng) {
  CVector v(d);
  do {
    for (int i = 0; i < d; ++i) v(i) = rng.complex_normal();
  } while (v.norm() == 0.0);
  return v / v.norm();
}

HermitianMatrix random_hermitian(int d, CounterRng& rng) {
  CMatrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = rng.complex_normal();
  return HermitianMatrix(g);
}

HermitianMatrix random_psd(int d, CounterRng& rng, int rank) {
  if (rank <= 0) rank = d;
  CMatrix g(d, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = rng.complex_normal();
  return HermitianMatrix(g * g.adjoint());
}

DensityMatrix random_density(int d, CounterRng& rng, double mix) {
  const HermitianMatrix w = random_psd(d, rng);
  const HermitianMatrix sigma = w * (1.0 / w.trace());
  return DensityMatrix::from(sigma * (1.0 - mix) + HermitianMatrix::identity(d) * (mix / d));
}

}  // namespace vbftrl
