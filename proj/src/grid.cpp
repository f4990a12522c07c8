#include "sqg/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sqg/errors.hpp"

namespace sqg {

Grid::Grid(int n, double box_length) : n_(n), length_(box_length) {
  if (n < 16 || n % 2 != 0) {
    throw InvalidArgument("grid size must be even and >= 16, got " + std::to_string(n));
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw InvalidArgument("box length must be positive and finite");
  }
  k_unit_ = 2.0 * std::numbers::pi / box_length;

  const std::size_t m = spectral_size();
  multiplicity_.assign(m, 0.0);
  abs_xi_.assign(m, 0.0);
  deriv1_.assign(m, 0.0);
  deriv2_.assign(m, 0.0);
  riesz1_.assign(m, 0.0);
  riesz2_.assign(m, 0.0);
  dealias_.assign(m, 0.0);

  const int nyq = n / 2;
  for (int j = 0; j < n; ++j) {
    const int m2 = mode2(j);
    for (int i = 0; i < half(); ++i) {
      const int m1 = mode1(i);
      const std::size_t idx = spectral_index(j, i);
      const double k1 = xi1(i);
      const double k2 = xi2(j);
      const double mag = std::hypot(k1, k2);
      multiplicity_[idx] = (i == 0 || i == nyq) ? 1.0 : 2.0;
      abs_xi_[idx] = mag;
      deriv1_[idx] = (i == nyq) ? 0.0 : k1;
      deriv2_[idx] = (j == nyq) ? 0.0 : k2;
      if (mag > 0.0) {
        riesz1_[idx] = (i == nyq) ? 0.0 : k1 / mag;
        riesz2_[idx] = (j == nyq) ? 0.0 : k2 / mag;
      }
      const bool keep = 3 * std::abs(m1) <= n && 3 * std::abs(m2) <= n && m1 != nyq && m2 != nyq;
      if (keep) {
        dealias_[idx] = 1.0;
        kept_modes_ += static_cast<std::size_t>(multiplicity_[idx]);
      }
    }
  }
  fft_ = std::make_unique<FftPlan2d>(n);
}

GridPtr make_grid(int n, double box_length) { return std::make_shared<const Grid>(n, box_length); }

}  // namespace sqg
