#pragma once

#include <span>

#include "sqg/field.hpp"
#include "sqg/kernels.hpp"

namespace sqg {

// Periodic bicubic B-spline interpolant of grid samples. The spline
// coefficients solve the periodic interpolation system exactly; the system is
// circulant per axis, so the prefilter is a division by
// (4 + 2 cos(2 pi m / n)) / 6 in Fourier space.
class SplineInterpolant {
 public:
  explicit SplineInterpolant(const ScalarField& f);

  double operator()(Point p) const;
  // out[i] = interpolant(px[i], py[i])
  void evaluate(std::span<const double> px, std::span<const double> py, std::span<double> out) const;

  kernels::SplineView view() const { return {coef_.data(), n_, 1.0 / h_}; }

 private:
  int n_;
  double h_;
  RealBuffer coef_;  // (n + 3)^2, halo of one before and two after
};

}  // namespace sqg
