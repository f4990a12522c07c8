// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "sqg/kernels.hpp"

namespace sqg::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) {
    y[i] += a * x[i];
  }
}

void axpy_out(const double* x, double a, const double* k, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(k + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) {
    out[i] = x[i] + a * k[i];
  }
}

void dot2(const double* a1, const double* b1, const double* a2, const double* b2, double* out,
          std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a1 + i), _mm256_loadu_pd(b1 + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(_mm256_loadu_pd(a2 + i), _mm256_loadu_pd(b2 + i), p));
  }
  for (; i < n; ++i) {
    out[i] = a1[i] * b1[i] + a2[i] * b2[i];
  }
}

double sum_squares(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(x + i);
    const __m256d v1 = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    acc += x[i] * x[i];
  }
  return acc;
}

// z is interleaved (re, im); two complex values per register.
double weighted_norm2(const double* w, const cplx* z, std::size_t n) {
  const double* zd = reinterpret_cast<const double*>(z);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(zd + 2 * i);
    // (w0, w0, w1, w1)
    const __m128d w2 = _mm_loadu_pd(w + i);
    const __m256d ww = _mm256_permute4x64_pd(_mm256_castpd128_pd256(w2), 0x50);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), ww, acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    total += w[i] * (z[i].real() * z[i].real() + z[i].imag() * z[i].imag());
  }
  return total;
}

void mul_real(const double* m, const cplx* in, cplx* out, std::size_t n) {
  const double* src = reinterpret_cast<const double*>(in);
  double* dst = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m128d m2 = _mm_loadu_pd(m + i);
    const __m256d mm = _mm256_permute4x64_pd(_mm256_castpd128_pd256(m2), 0x50);
    _mm256_storeu_pd(dst + 2 * i, _mm256_mul_pd(mm, _mm256_loadu_pd(src + 2 * i)));
  }
  for (; i < n; ++i) {
    out[i] = cplx(m[i] * in[i].real(), m[i] * in[i].imag());
  }
}

void mul_imag(const double* m, const cplx* in, cplx* out, std::size_t n) {
  const double* src = reinterpret_cast<const double*>(in);
  double* dst = reinterpret_cast<double*>(out);
  // i * (a + ib) = -b + ia: swap within each pair, negate the new real part
  const __m256d sign = _mm256_set_pd(1.0, -1.0, 1.0, -1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m128d m2 = _mm_loadu_pd(m + i);
    const __m256d mm = _mm256_permute4x64_pd(_mm256_castpd128_pd256(m2), 0x50);
    const __m256d v = _mm256_loadu_pd(src + 2 * i);
    const __m256d sw = _mm256_permute_pd(v, 0x5);
    _mm256_storeu_pd(dst + 2 * i, _mm256_mul_pd(_mm256_mul_pd(sw, sign), mm));
  }
  for (; i < n; ++i) {
    out[i] = cplx(-m[i] * in[i].imag(), m[i] * in[i].real());
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
    __m256d col = _mm256_mul_pd(_mm256_set1_pd(wy[0]), _mm256_loadu_pd(base));
    col = _mm256_fmadd_pd(_mm256_set1_pd(wy[1]), _mm256_loadu_pd(base + stride), col);
    col = _mm256_fmadd_pd(_mm256_set1_pd(wy[2]), _mm256_loadu_pd(base + 2 * stride), col);
    col = _mm256_fmadd_pd(_mm256_set1_pd(wy[3]), _mm256_loadu_pd(base + 3 * stride), col);
    out[p] = hsum(_mm256_mul_pd(col, _mm256_loadu_pd(wx)));
  }
}

}  // namespace

const KernelTable& avx2_table_impl() {
  static const KernelTable table{"avx2",         axpy,     axpy_out, dot2,       sum_squares,
                                 weighted_norm2, mul_real, mul_imag, spline_eval};
  return table;
}

}  // namespace sqg::kernels
