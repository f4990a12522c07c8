#include "sqg/kernels.hpp"

namespace sqg::kernels {
namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += a * x[i];
  }
}

void axpy_out(const double* x, double a, const double* k, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = x[i] + a * k[i];
  }
}

void dot2(const double* a1, const double* b1, const double* a2, const double* b2, double* out,
          std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a1[i] * b1[i] + a2[i] * b2[i];
  }
}

double sum_squares(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i] * x[i];
  }
  return acc;
}

double weighted_norm2(const double* w, const cplx* z, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += w[i] * (z[i].real() * z[i].real() + z[i].imag() * z[i].imag());
  }
  return acc;
}

void mul_real(const double* m, const cplx* in, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = cplx(m[i] * in[i].real(), m[i] * in[i].imag());
  }
}

void mul_imag(const double* m, const cplx* in, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
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
    // padded row r holds grid row r - 1
    const double* base = s.coef + static_cast<std::size_t>(j0) * stride + static_cast<std::size_t>(i0);
    double acc = 0.0;
    for (int r = 0; r < 4; ++r) {
      const double* row = base + static_cast<std::size_t>(r) * stride;
      const double rowsum = wx[0] * row[0] + wx[1] * row[1] + wx[2] * row[2] + wx[3] * row[3];
      acc += wy[r] * rowsum;
    }
    out[p] = acc;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", axpy,     axpy_out, dot2,       sum_squares,
                                 weighted_norm2, mul_real, mul_imag, spline_eval};
  return table;
}

}  // namespace sqg::kernels
