#include "sqg/interpolation.hpp"

#include <cmath>
#include <numbers>

#include "sqg/errors.hpp"

namespace sqg {

SplineInterpolant::SplineInterpolant(const ScalarField& f) : n_(f.grid().n()), h_(f.grid().dx()) {
  const Grid& g = f.grid();
  SpectralField c = to_spectral(f);
  RealBuffer symbol(n_);
  for (int m = 0; m < n_; ++m) {
    symbol[m] = (4.0 + 2.0 * std::cos(2.0 * std::numbers::pi * m / n_)) / 6.0;
  }
  for (int j = 0; j < n_; ++j) {
    for (int i = 0; i < g.half(); ++i) {
      c.coeffs()[g.spectral_index(j, i)] /= symbol[j] * symbol[i];
    }
  }
  const ScalarField raw = from_spectral(c);

  const int stride = n_ + 3;
  coef_.assign(static_cast<std::size_t>(stride) * stride, 0.0);
  for (int r = 0; r < stride; ++r) {
    const int j = (r - 1 + n_) % n_;
    for (int q = 0; q < stride; ++q) {
      const int i = (q - 1 + n_) % n_;
      coef_[static_cast<std::size_t>(r) * stride + q] = raw.at(i, j);
    }
  }
}

double SplineInterpolant::operator()(Point p) const {
  double out = 0.0;
  kernels::active().spline_eval(view(), &p.x1, &p.x2, &out, 1);
  return out;
}

void SplineInterpolant::evaluate(std::span<const double> px, std::span<const double> py,
                                 std::span<double> out) const {
  if (px.size() != py.size() || px.size() != out.size()) {
    throw InvalidArgument("spline evaluate: size mismatch");
  }
  kernels::active().spline_eval(view(), px.data(), py.data(), out.data(), out.size());
}

}  // namespace sqg
