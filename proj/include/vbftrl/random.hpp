#pragma once

// Platform-stable pseudo-random numbers.
//
// CounterRng is counter based: the i-th draw of stream s under seed k is
// splitmix64(k ^ splitmix64(s) + (i + 1) * 0x9E3779B97F4A7C15). Nothing
// depends on std:: distributions, whose output differs between standard
// libraries. Uniforms take the top 53 bits; normals use Box-Muller with both
// outputs consumed in order; a standard complex normal has independent real
// and imaginary parts of variance 1/2.

#include "vbftrl/herm.hpp"

#include <cstdint>
#include <optional>

namespace vbftrl {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t next_u64() noexcept;
  /// [0, 1)
  double uniform() noexcept;
  /// (0, 1]
  double uniform_pos() noexcept { return 1.0 - uniform(); }
  double normal() noexcept;
  Complex complex_normal() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_;
};

/// Unit-norm vector with i.i.d. standard complex normal entries before normalization.
CVector random_unit_vector(int d, CounterRng& rng);
/// (G + G^*)/2 with G i.i.d. standard complex normal.
HermitianMatrix random_hermitian(int d, CounterRng& rng);
/// G G^* with G a d x rank complex Gaussian matrix.
HermitianMatrix random_psd(int d, CounterRng& rng, int rank = -1);
/// (1 - mix) * sigma + mix * I/d, sigma = G G^*/tr(G G^*). mix in [0, 1].
DensityMatrix random_density(int d, CounterRng& rng, double mix = 0.0);

}  // namespace vbftrl
