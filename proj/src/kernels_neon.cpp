// aarch64 variants. NEON is baseline on aarch64, so no runtime check is needed.

#include <arm_neon.h>

#include "sqg/kernels.hpp"

namespace sqg::kernels {
namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) {
    y[i] += a * x[i];
  }
}

void axpy_out(const double* x, double a, const double* k, double* out, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vfmaq_f64(vld1q_f64(x + i), va, vld1q_f64(k + i)));
  }
  for (; i < n; ++i) {
    out[i] = x[i] + a * k[i];
  }
}

void dot2(const double* a1, const double* b1, const double* a2, const double* b2, double* out,
          std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t p = vmulq_f64(vld1q_f64(a1 + i), vld1q_f64(b1 + i));
    vst1q_f64(out + i, vfmaq_f64(p, vld1q_f64(a2 + i), vld1q_f64(b2 + i)));
  }
  for (; i < n; ++i) {
    out[i] = a1[i] * b1[i] + a2[i] * b2[i];
  }
}

double sum_squares(const double* x, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t v0 = vld1q_f64(x + i);
    const float64x2_t v1 = vld1q_f64(x + i + 2);
    acc0 = vfmaq_f64(acc0, v0, v0);
    acc1 = vfmaq_f64(acc1, v1, v1);
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) {
    acc += x[i] * x[i];
  }
  return acc;
}

double weighted_norm2(const double* w, const cplx* z, std::size_t n) {
  const double* zd = reinterpret_cast<const double*>(z);
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t v = vld1q_f64(zd + 2 * i);
    acc = vfmaq_f64(acc, vmulq_f64(v, v), vdupq_n_f64(w[i]));
  }
  return vaddvq_f64(acc);
}

void mul_real(const double* m, const cplx* in, cplx* out, std::size_t n) {
  const double* src = reinterpret_cast<const double*>(in);
  double* dst = reinterpret_cast<double*>(out);
  for (std::size_t i = 0; i < n; ++i) {
    vst1q_f64(dst + 2 * i, vmulq_f64(vdupq_n_f64(m[i]), vld1q_f64(src + 2 * i)));
  }
}

void mul_imag(const double* m, const cplx* in, cplx* out, std::size_t n) {
  const double* src = reinterpret_cast<const double*>(in);
  double* dst = reinterpret_cast<double*>(out);
  const float64x2_t sign = {-1.0, 1.0};
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t v = vld1q_f64(src + 2 * i);
    const float64x2_t sw = vextq_f64(v, v, 1);
    vst1q_f64(dst + 2 * i, vmulq_f64(vmulq_f64(sw, sign), vdupq_n_f64(m[i])));
  }
}

void spline_eval(const SplineView& s, const double* px, const double* py, double* out,
                 std::size_t n) {
  const std::size_t stride = static_cast<std::size_t>(s.n) + 3;
  for (std::size_t p = 0; p < n; ++p) {
    int i0 = 0;
    int j0 = 0;
    double tx = 0.0;
    double ty = 0.0;
    periodic_locate(px[p] * s.inv_h, s.n, i0, tx);
    periodic_locate(py[p] * s.inv_h, s.n, j0, ty);
    double wx[4];
    double wy[4];
    bspline_weights(tx, wx);
    bspline_weights(ty, wy);
    const double* base = s.coef + static_cast<std::size_t>(j0) * stride + static_cast<std::size_t>(i0);
    float64x2_t lo = vmulq_n_f64(vld1q_f64(base), wy[0]);
    float64x2_t hi = vmulq_n_f64(vld1q_f64(base + 2), wy[0]);
    for (int r = 1; r < 4; ++r) {
      const double* row = base + static_cast<std::size_t>(r) * stride;
      lo = vfmaq_n_f64(lo, vld1q_f64(row), wy[r]);
      hi = vfmaq_n_f64(hi, vld1q_f64(row + 2), wy[r]);
    }
    const float64x2_t prod = vfmaq_f64(vmulq_f64(lo, vld1q_f64(wx)), hi, vld1q_f64(wx + 2));
    out[p] = vaddvq_f64(prod);
  }
}

}  // namespace

const KernelTable& neon_table_impl() {
  static const KernelTable table{"neon",         axpy,     axpy_out, dot2,       sum_squares,
                                 weighted_norm2, mul_real, mul_imag, spline_eval};
  return table;
}

}  // namespace sqg::kernels
