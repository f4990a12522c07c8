#pragma once

#include <cstdint>

#include "sqg/field.hpp"

namespace sqg {

// Counter-based generator: draw k of stream `seed` is splitmix64(seed + (k+1)*G)
// with G = 0x9E3779B97F4A7C15. Any draw can be recomputed from (seed, k) alone,
// so results do not depend on call order across threads or platforms.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) : seed_(seed), counter_(counter) {}

  static std::uint64_t mix(std::uint64_t z);
  static std::uint64_t at(std::uint64_t seed, std::uint64_t counter);

  std::uint64_t next_u64() { return at(seed_, counter_++); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Standard normal by Box-Muller; consumes two draws.
  double normal();
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

struct RandomFieldSpec {
  int kmax = 4;          // integer modes with |m1|, |m2| <= kmax
  double slope = 2.0;    // amplitude envelope (1 + |m|^2)^(-slope / 2)
  double l2 = 1.0;       // target continuum L2 norm
};

// Smooth real mean-zero field with random Fourier coefficients on the integer
// modes up to kmax. Throws if kmax leaves the dealiased band.
ScalarField random_band_limited(GridPtr grid, std::uint64_t seed, const RandomFieldSpec& spec = {});

// Projects onto the dealiased band and drops the mean.
ScalarField band_project(const ScalarField& f);

}  // namespace sqg
