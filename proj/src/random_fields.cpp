#include "sqg/random_fields.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sqg/errors.hpp"

namespace sqg {

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::at(std::uint64_t seed, std::uint64_t counter) {
  return mix(seed + (counter + 1) * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  // 1 - u keeps the log argument in (0, 1]
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ScalarField random_band_limited(GridPtr grid, std::uint64_t seed, const RandomFieldSpec& spec) {
  const Grid& g = *grid;
  const int n = g.n();
  if (spec.kmax < 1 || 3 * spec.kmax > n || 2 * spec.kmax >= n) {
    throw InvalidArgument("random field: kmax " + std::to_string(spec.kmax) + " outside the dealiased band of n = " +
                          std::to_string(n));
  }
  if (!(spec.l2 >= 0.0)) {
    throw InvalidArgument("random field: l2 must be >= 0");
  }
  SpectralField c(grid);
  CounterRng rng(seed);
  // upper half plane of integer modes, fixed visiting order
  for (int m2 = -spec.kmax; m2 <= spec.kmax; ++m2) {
    for (int m1 = 0; m1 <= spec.kmax; ++m1) {
      if (m1 == 0 && m2 <= 0) {
        continue;
      }
      const double a = rng.normal();
      const double b = rng.normal();
      const double env = std::pow(1.0 + m1 * m1 + m2 * m2, -0.5 * spec.slope);
      const cplx v = 0.5 * env * cplx(a, -b);
      const int j = (m2 + n) % n;
      c.coeffs()[g.spectral_index(j, m1)] = v;
      if (m1 == 0) {
        c.coeffs()[g.spectral_index(g.neg_row(j), 0)] = std::conj(v);
      }
    }
  }
  const double norm = sobolev_norm(c, SobolevIndex(0.0));
  if (norm > 0.0) {
    const double scale = spec.l2 / norm;
    for (cplx& v : c.coeffs()) {
      v *= scale;
    }
  }
  return from_spectral(c);
}

ScalarField band_project(const ScalarField& f) { return from_spectral(remove_mean(dealias(to_spectral(f)))); }

}  // namespace sqg
