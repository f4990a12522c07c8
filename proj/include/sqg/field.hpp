#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "sqg/aligned.hpp"
#include "sqg/grid.hpp"

namespace sqg {

using cplx = std::complex<double>;

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

// Sobolev exponent s >= 0.
class SobolevIndex {
 public:
  explicit SobolevIndex(double s);
  double value() const { return s_; }

 private:
  double s_;
};

// Real samples of a scalar on the grid. Values are immutable once built; the
// arithmetic helpers below return new fields.
class ScalarField {
 public:
  explicit ScalarField(GridPtr grid);  // zeros
  ScalarField(GridPtr grid, RealBuffer values);
  ScalarField(GridPtr grid, std::span<const double> values);

  static ScalarField from_function(GridPtr grid, const std::function<double(double, double)>& f);
  static ScalarField constant(GridPtr grid, double c);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  const double* data() const { return values_.data(); }
  std::size_t size() const { return values_.size(); }
  // (i along x1, j along x2)
  double at(int i, int j) const { return values_[static_cast<std::size_t>(j) * grid_->n() + i]; }

  // Escape hatch for code that builds a field in place.
  RealBuffer& mutable_values() { return values_; }

 private:
  GridPtr grid_;
  RealBuffer values_;
};

// Half-spectrum Fourier-series coefficients (see FftPlan2d for layout).
class SpectralField {
 public:
  explicit SpectralField(GridPtr grid);  // zeros
  SpectralField(GridPtr grid, ComplexBuffer coeffs);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  std::span<cplx> coeffs() { return coeffs_; }
  cplx at(int j, int i) const { return coeffs_[grid_->spectral_index(j, i)]; }

 private:
  GridPtr grid_;
  ComplexBuffer coeffs_;
};

class VectorField2 {
 public:
  VectorField2(ScalarField x, ScalarField y);
  static VectorField2 zeros(GridPtr grid);

  const ScalarField& x() const { return x_; }
  const ScalarField& y() const { return y_; }
  const ScalarField& component(int k) const { return k == 1 ? x_ : y_; }
  const Grid& grid() const { return x_.grid(); }
  const GridPtr& grid_ptr() const { return x_.grid_ptr(); }

 private:
  ScalarField x_;
  ScalarField y_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* where);

// --- transforms ---------------------------------------------------------

SpectralField to_spectral(const ScalarField& f);
ScalarField from_spectral(const SpectralField& c);

// Multiplies the spectrum by m(xi1, xi2) and returns the real part of the
// inverse transform. m(0, 0) is whatever the callable returns there. Throws
// NonHermitianMultiplier if the discarded imaginary part exceeds 1e-10 of the
// output magnitude (L2).
ScalarField apply_multiplier(const ScalarField& f, const std::function<cplx(double, double)>& m);

// Spectral helpers used by the operator layer.
SpectralField multiply_real(const SpectralField& c, std::span<const double> m);
SpectralField multiply_imag(const SpectralField& c, std::span<const double> m);
SpectralField dealias(const SpectralField& c);
SpectralField remove_mean(const SpectralField& c);

// --- norms ----------------------------------------------------------------

// (sum_xi (1 + |xi|^2)^s |c_xi|^2 * L^2)^{1/2}; s = 0 is the continuum L2 norm.
// With `truncate` the sum only runs over the dealiased band.
double sobolev_norm(const SpectralField& c, SobolevIndex s, bool truncate = false);
double sobolev_norm(const ScalarField& f, SobolevIndex s, bool truncate = false);

// Quadrature L2 norm (sum f^2 dx^2)^{1/2}.
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField2& u);
double inner_product(const ScalarField& f, const ScalarField& g);

// Largest |f| on the grid.
double grid_max_abs(const ScalarField& f);
double grid_max_abs(const VectorField2& u);

// Supremum of |f| for the trigonometric interpolant of the samples: grid
// maxima refined by Newton's method on the interpolant. Agrees with the
// continuum sup norm for band-limited fields, unlike the raw grid maximum.
double linf_norm(const ScalarField& f);

double mean(const ScalarField& f);

// --- calculus -------------------------------------------------------------

VectorField2 gradient(const ScalarField& f);
ScalarField divergence(const VectorField2& u);

// --- pointwise arithmetic (vectorised) --------------------------------------

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
ScalarField operator-(const ScalarField& a);
// a + s * b
ScalarField axpy(const ScalarField& a, double s, const ScalarField& b);

VectorField2 operator+(const VectorField2& a, const VectorField2& b);
VectorField2 operator-(const VectorField2& a, const VectorField2& b);
VectorField2 operator*(double s, const VectorField2& a);
VectorField2 axpy(const VectorField2& a, double s, const VectorField2& b);

bool all_finite(const ScalarField& f);

// --- exact point evaluation -------------------------------------------------

struct TrigJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d11 = 0.0;
  double d12 = 0.0;
  double d22 = 0.0;
};

// Direct evaluation of the trigonometric interpolant sum_k c_k exp(i k.x) at
// arbitrary points. Cost is O(#nonzero modes) per point; modes below
// 1e-16 of the largest coefficient are skipped.
class TrigEvaluator {
 public:
  explicit TrigEvaluator(const SpectralField& c);
  explicit TrigEvaluator(const ScalarField& f);

  double value(Point p) const;
  TrigJet jet(Point p) const;
  std::size_t active_modes() const { return modes_.size(); }

 private:
  struct Mode {
    int row;       // x2 table index
    int col;       // x1 table index
    double k1;
    double k2;
    cplx weight;   // multiplicity * coefficient
  };
  GridPtr grid_;
  std::vector<Mode> modes_;
};

}  // namespace sqg
