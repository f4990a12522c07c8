#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "sqg/aligned.hpp"
#include "sqg/fft.hpp"

namespace sqg {

// Uniform periodic grid on the square box [0, L)^2.
//
// Wavenumbers per axis are (2 pi / L) * m with m in {-n/2 + 1, ..., n/2}; the
// Nyquist index n/2 carries the positive wavenumber. Per-mode tables below are
// laid out over the half spectrum (see FftPlan2d).
class Grid {
 public:
  // n even and >= 16, box_length > 0; throws InvalidArgument otherwise.
  Grid(int n, double box_length);

  int n() const { return n_; }
  double box_length() const { return length_; }
  double dx() const { return length_ / n_; }
  int half() const { return n_ / 2 + 1; }  // stored k1 columns
  std::size_t real_size() const { return static_cast<std::size_t>(n_) * n_; }
  std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * half(); }
  double cell_area() const { return dx() * dx(); }

  double x(int i) const { return i * dx(); }

  // Signed integer mode of row j (x2 axis) and column i (x1 axis, i <= n/2).
  int mode2(int j) const { return j <= n_ / 2 ? j : j - n_; }
  int mode1(int i) const { return i; }
  double k_unit() const { return k_unit_; }  // 2 pi / L
  double xi1(int i) const { return k_unit_ * mode1(i); }
  double xi2(int j) const { return k_unit_ * mode2(j); }
  std::size_t spectral_index(int j, int i) const { return static_cast<std::size_t>(j) * half() + i; }

  // Row index of -m2 (mod n).
  int neg_row(int j) const { return (n_ - j) % n_; }

  // Multiplicity of a stored mode in the full spectrum: 2 for interior k1
  // columns (their conjugate partner is implied), 1 on the k1 = 0 and k1 = n/2
  // columns.
  std::span<const double> multiplicity() const { return multiplicity_; }
  std::span<const double> abs_xi() const { return abs_xi_; }
  // xi_k with the Nyquist index of axis k zeroed.
  std::span<const double> deriv1() const { return deriv1_; }
  std::span<const double> deriv2() const { return deriv2_; }
  // xi_k / |xi| with the zero mode and Nyquist index of axis k zeroed.
  std::span<const double> riesz1() const { return riesz1_; }
  std::span<const double> riesz2() const { return riesz2_; }
  // 1 where |m_1| <= n/3 and |m_2| <= n/3, else 0.
  std::span<const double> dealias_mask() const { return dealias_; }
  bool keeps(int j, int i) const { return dealias_[spectral_index(j, i)] != 0.0; }
  // Number of kept modes in the full spectrum.
  std::size_t kept_modes() const { return kept_modes_; }

  const FftPlan2d& fft() const { return *fft_; }

  bool same_as(const Grid& other) const {
    return this == &other || (n_ == other.n_ && length_ == other.length_);
  }

 private:
  int n_;
  double length_;
  double k_unit_;
  RealBuffer multiplicity_;
  RealBuffer abs_xi_;
  RealBuffer deriv1_;
  RealBuffer deriv2_;
  RealBuffer riesz1_;
  RealBuffer riesz2_;
  RealBuffer dealias_;
  std::size_t kept_modes_ = 0;
  std::unique_ptr<FftPlan2d> fft_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int n, double box_length);

}  // namespace sqg
