#pragma once

// Data-parallel inner loops shared by the spectral and interpolation code.
//
// Every kernel has a scalar reference implementation. Vector variants (AVX2+FMA
// on x86-64, NEON on aarch64) are selected once at runtime; the environment
// variable SQG_KERNELS=scalar forces the reference path. Variants agree with the
// reference up to floating-point reassociation (see tests/test_kernels.cpp).

#include <complex>
#include <cstddef>
#include <string_view>

namespace sqg::kernels {

using cplx = std::complex<double>;

// Periodic cubic B-spline coefficients padded with a halo of one row/column
// before and two after, so that the 4x4 stencil of any base index in [0, n)
// is contiguous within each row.
struct SplineView {
  const double* coef = nullptr;  // (n + 3) * (n + 3) values, row-major
  int n = 0;                     // points per axis
  double inv_h = 0.0;            // 1 / grid spacing
};

struct KernelTable {
  const char* name;

  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out[i] = x[i] + a * k[i]
  void (*axpy_out)(const double* x, double a, const double* k, double* out, std::size_t n);
  // out[i] = a1[i] * b1[i] + a2[i] * b2[i]
  void (*dot2)(const double* a1, const double* b1, const double* a2, const double* b2, double* out,
               std::size_t n);
  // sum of x[i]^2
  double (*sum_squares)(const double* x, std::size_t n);
  // sum of w[i] * |z[i]|^2
  double (*weighted_norm2)(const double* w, const cplx* z, std::size_t n);
  // out[i] = m[i] * in[i]
  void (*mul_real)(const double* m, const cplx* in, cplx* out, std::size_t n);
  // out[i] = 1i * m[i] * in[i]
  void (*mul_imag)(const double* m, const cplx* in, cplx* out, std::size_t n);
  // out[i] = spline(px[i], py[i])
  void (*spline_eval)(const SplineView& s, const double* px, const double* py, double* out,
                      std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the running CPU (or the build) lacks the instruction set.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// Table used by the library; chosen on first call.
const KernelTable& active();

// Cubic B-spline weights for fractional offset t in [0, 1].
inline void bspline_weights(double t, double w[4]) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double omt = 1.0 - t;
  w[0] = omt * omt * omt / 6.0;
  w[1] = (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0;
  w[2] = (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0;
  w[3] = t3 / 6.0;
}

// Maps a coordinate (already scaled by 1/h) into a base index in [0, n) and an
// offset in [0, 1].
inline void periodic_locate(double s, int n, int& base, double& t) {
  const double dn = static_cast<double>(n);
  s -= dn * __builtin_floor(s / dn);
  double fl = __builtin_floor(s);
  base = static_cast<int>(fl);
  t = s - fl;
  if (base >= n) {
    base -= n;
  }
  if (base < 0) {
    base += n;
  }
}

}  // namespace sqg::kernels
