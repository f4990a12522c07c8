#include "sqg/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "sqg/aligned.hpp"
#include "sqg/errors.hpp"

namespace sqg {
namespace {

// The FFTW planner is not thread-safe; execution with new-array functions is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftPlan2d::FftPlan2d(int n) : n_(n) {
  RealBuffer real(real_size());
  ComplexBuffer spec(spectral_size());
  auto* r = real.data();
  auto* c = reinterpret_cast<fftw_complex*>(spec.data());
  std::lock_guard<std::mutex> lock(planner_mutex());
  r2c_ = fftw_plan_dft_r2c_2d(n, n, r, c, FFTW_ESTIMATE);
  c2r_ = fftw_plan_dft_c2r_2d(n, n, c, r, FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
  if (r2c_ == nullptr || c2r_ == nullptr) {
    throw Error("FFTW failed to create a plan");
  }
}

FftPlan2d::~FftPlan2d() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(r2c_));
  fftw_destroy_plan(static_cast<fftw_plan>(c2r_));
}

void FftPlan2d::forward(const double* in, std::complex<double>* out) const {
  // r2c never writes to its input; FFTW just lacks the const.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
  const double scale = 1.0 / static_cast<double>(real_size());
  const std::size_t m = spectral_size();
  for (std::size_t i = 0; i < m; ++i) {
    out[i] *= scale;
  }
}

void FftPlan2d::inverse(const std::complex<double>* in, double* out) const {
  ComplexBuffer scratch(in, in + spectral_size());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_), reinterpret_cast<fftw_complex*>(scratch.data()),
                       out);
}

}  // namespace sqg
