#pragma once

#include <complex>
#include <cstddef>

namespace sqg {

// Real 2D transform pair on an n x n periodic grid, backed by FFTW.
//
// Layout: physical values are row-major with the row index along x2 and the
// column index along x1. The half spectrum is n rows (k2) by n/2 + 1 columns
// (k1 >= 0). forward() returns Fourier-series coefficients, i.e. it divides by
// n^2, so that f(x) = sum_k c_k exp(i k.x).
//
// Planning uses FFTW_ESTIMATE so the plan, and therefore every result, is
// reproducible from run to run. Execution is thread-safe; buffers passed in
// must be 64-byte aligned (see aligned.hpp).
class FftPlan2d {
 public:
  explicit FftPlan2d(int n);
  ~FftPlan2d();
  FftPlan2d(const FftPlan2d&) = delete;
  FftPlan2d& operator=(const FftPlan2d&) = delete;

  int n() const { return n_; }
  std::size_t real_size() const { return static_cast<std::size_t>(n_) * n_; }
  std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * (n_ / 2 + 1); }

  void forward(const double* in, std::complex<double>* out) const;
  // `in` is left untouched.
  void inverse(const std::complex<double>* in, double* out) const;

 private:
  int n_;
  void* r2c_ = nullptr;
  void* c2r_ = nullptr;
};

}  // namespace sqg
