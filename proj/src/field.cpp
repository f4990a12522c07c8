#include "sqg/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqg/errors.hpp"
#include "sqg/kernels.hpp"

namespace sqg {

SobolevIndex::SobolevIndex(double s) : s_(s) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw InvalidArgument("Sobolev index must be finite and >= 0");
  }
}

// --- ScalarField / SpectralField / VectorField2 -----------------------------

ScalarField::ScalarField(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) {
    throw InvalidArgument("field needs a grid");
  }
  values_.assign(grid_->real_size(), 0.0);
}

ScalarField::ScalarField(GridPtr grid, RealBuffer values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) {
    throw InvalidArgument("field needs a grid");
  }
  if (values_.size() != grid_->real_size()) {
    throw InvalidArgument("field has " + std::to_string(values_.size()) + " values, grid expects " +
                          std::to_string(grid_->real_size()));
  }
}

ScalarField::ScalarField(GridPtr grid, std::span<const double> values)
    : ScalarField(std::move(grid), RealBuffer(values.begin(), values.end())) {}

ScalarField ScalarField::from_function(GridPtr grid, const std::function<double(double, double)>& f) {
  ScalarField out(grid);
  const int n = grid->n();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      out.values_[static_cast<std::size_t>(j) * n + i] = f(grid->x(i), grid->x(j));
    }
  }
  return out;
}

ScalarField ScalarField::constant(GridPtr grid, double c) {
  ScalarField out(std::move(grid));
  std::fill(out.values_.begin(), out.values_.end(), c);
  return out;
}

SpectralField::SpectralField(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) {
    throw InvalidArgument("spectrum needs a grid");
  }
  coeffs_.assign(grid_->spectral_size(), cplx(0.0, 0.0));
}

SpectralField::SpectralField(GridPtr grid, ComplexBuffer coeffs) : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (!grid_) {
    throw InvalidArgument("spectrum needs a grid");
  }
  if (coeffs_.size() != grid_->spectral_size()) {
    throw InvalidArgument("spectrum has " + std::to_string(coeffs_.size()) + " coefficients, grid expects " +
                          std::to_string(grid_->spectral_size()));
  }
}

VectorField2::VectorField2(ScalarField x, ScalarField y) : x_(std::move(x)), y_(std::move(y)) {
  require_same_grid(x_.grid(), y_.grid(), "VectorField2");
}

VectorField2 VectorField2::zeros(GridPtr grid) { return VectorField2(ScalarField(grid), ScalarField(grid)); }

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!a.same_as(b)) {
    throw InvalidArgument(std::string(where) + ": grid mismatch (" + std::to_string(a.n()) + " vs " +
                          std::to_string(b.n()) + ")");
  }
}

// --- transforms ---------------------------------------------------------

SpectralField to_spectral(const ScalarField& f) {
  SpectralField out(f.grid_ptr());
  f.grid().fft().forward(f.data(), out.coeffs().data());
  return out;
}

ScalarField from_spectral(const SpectralField& c) {
  RealBuffer values(c.grid().real_size());
  c.grid().fft().inverse(c.coeffs().data(), values.data());
  return ScalarField(c.grid_ptr(), std::move(values));
}

ScalarField apply_multiplier(const ScalarField& f, const std::function<cplx(double, double)>& m) {
  const Grid& g = f.grid();
  const SpectralField in = to_spectral(f);
  SpectralField out(f.grid_ptr());
  const int n = g.n();
  double kept = 0.0;
  double discarded = 0.0;
  auto mult = g.multiplicity();
  for (int j = 0; j < n; ++j) {
    const int jneg = g.neg_row(j);
    // the stored mode -xi lives on the row of -m2; its wavenumber is the one
    // the grid assigns to that row (the Nyquist row maps to itself)
    for (int i = 0; i < g.half(); ++i) {
      const std::size_t idx = g.spectral_index(j, i);
      const cplx mp = m(g.xi1(i), g.xi2(j));
      const double neg_xi1 = (i == n / 2) ? g.xi1(i) : -g.xi1(i);
      const cplx mn = m(neg_xi1, g.xi2(jneg));
      const cplx c = in.coeffs()[idx];
      const cplx herm = 0.5 * (mp + std::conj(mn)) * c;
      const cplx anti = 0.5 * (mp - std::conj(mn)) * c;
      out.coeffs()[idx] = herm;
      kept += mult[idx] * std::norm(herm);
      discarded += mult[idx] * std::norm(anti);
    }
  }
  if (std::sqrt(discarded) > 1e-10 * std::max(std::sqrt(kept), 1e-300) && discarded > 0.0) {
    throw NonHermitianMultiplier("multiplier is not Hermitian on this field: imaginary part " +
                                 std::to_string(std::sqrt(discarded)) + " vs real part " +
                                 std::to_string(std::sqrt(kept)));
  }
  return from_spectral(out);
}

SpectralField multiply_real(const SpectralField& c, std::span<const double> m) {
  SpectralField out(c.grid_ptr());
  kernels::active().mul_real(m.data(), c.coeffs().data(), out.coeffs().data(), c.coeffs().size());
  return out;
}

SpectralField multiply_imag(const SpectralField& c, std::span<const double> m) {
  SpectralField out(c.grid_ptr());
  kernels::active().mul_imag(m.data(), c.coeffs().data(), out.coeffs().data(), c.coeffs().size());
  return out;
}

SpectralField dealias(const SpectralField& c) { return multiply_real(c, c.grid().dealias_mask()); }

SpectralField remove_mean(const SpectralField& c) {
  SpectralField out = c;
  out.coeffs()[0] = cplx(0.0, 0.0);
  return out;
}

// --- norms ----------------------------------------------------------------

double sobolev_norm(const SpectralField& c, SobolevIndex s, bool truncate) {
  const Grid& g = c.grid();
  const std::size_t m = g.spectral_size();
  RealBuffer w(m);
  auto mult = g.multiplicity();
  auto mag = g.abs_xi();
  auto mask = g.dealias_mask();
  const double sv = s.value();
  for (std::size_t idx = 0; idx < m; ++idx) {
    const double weight = sv == 0.0 ? 1.0 : std::pow(1.0 + mag[idx] * mag[idx], sv);
    w[idx] = mult[idx] * weight * (truncate ? mask[idx] : 1.0);
  }
  const double sum = kernels::active().weighted_norm2(w.data(), c.coeffs().data(), m);
  return g.box_length() * std::sqrt(sum);
}

double sobolev_norm(const ScalarField& f, SobolevIndex s, bool truncate) {
  return sobolev_norm(to_spectral(f), s, truncate);
}

double l2_norm(const ScalarField& f) {
  return std::sqrt(kernels::active().sum_squares(f.data(), f.size()) * f.grid().cell_area());
}

double l2_norm(const VectorField2& u) {
  const double a = l2_norm(u.x());
  const double b = l2_norm(u.y());
  return std::sqrt(a * a + b * b);
}

double inner_product(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    acc += f.data()[i] * g.data()[i];
  }
  return acc * f.grid().cell_area();
}

double grid_max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

double grid_max_abs(const VectorField2& u) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.x().size(); ++i) {
    m = std::max(m, std::hypot(u.x().data()[i], u.y().data()[i]));
  }
  return m;
}

double linf_norm(const ScalarField& f) {
  const double grid_max = grid_max_abs(f);
  if (grid_max == 0.0 || !std::isfinite(grid_max)) {
    return grid_max;
  }
  const Grid& g = f.grid();
  const int n = g.n();
  auto at = [&](int i, int j) { return std::abs(f.at((i + n) % n, (j + n) % n)); };

  // local maxima of |f| close to the global grid maximum
  struct Candidate {
    double value;
    int i;
    int j;
  };
  std::vector<Candidate> cands;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double v = at(i, j);
      if (v < 0.98 * grid_max) {
        continue;
      }
      bool is_max = true;
      for (int dj = -1; dj <= 1 && is_max; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if ((di != 0 || dj != 0) && at(i + di, j + dj) > v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) {
        cands.push_back({v, i, j});
      }
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return a.value > b.value || (a.value == b.value && (a.j < b.j || (a.j == b.j && a.i < b.i)));
  });
  if (cands.size() > 16) {
    cands.resize(16);
  }

  const TrigEvaluator eval(f);
  const double h = g.dx();
  double best = grid_max;
  for (const Candidate& c : cands) {
    Point p{g.x(c.i), g.x(c.j)};
    TrigJet jet = eval.jet(p);
    double local_best = std::abs(jet.value);
    for (int it = 0; it < 30; ++it) {
      // Newton on grad f = 0
      const double det = jet.d11 * jet.d22 - jet.d12 * jet.d12;
      if (det == 0.0) {
        break;
      }
      double s1 = -(jet.d22 * jet.d1 - jet.d12 * jet.d2) / det;
      double s2 = -(-jet.d12 * jet.d1 + jet.d11 * jet.d2) / det;
      const double len = std::hypot(s1, s2);
      if (len > h) {
        s1 *= h / len;
        s2 *= h / len;
      }
      const Point q{p.x1 + s1, p.x2 + s2};
      const TrigJet next = eval.jet(q);
      if (std::abs(next.value) < local_best) {
        break;
      }
      p = q;
      jet = next;
      local_best = std::abs(jet.value);
      if (len < 1e-13 * g.box_length()) {
        break;
      }
    }
    best = std::max(best, local_best);
  }
  return best;
}

double mean(const ScalarField& f) {
  double acc = 0.0;
  for (double v : f.values()) {
    acc += v;
  }
  return acc / static_cast<double>(f.size());
}

// --- calculus -------------------------------------------------------------

VectorField2 gradient(const ScalarField& f) {
  const SpectralField c = to_spectral(f);
  return VectorField2(from_spectral(multiply_imag(c, f.grid().deriv1())),
                      from_spectral(multiply_imag(c, f.grid().deriv2())));
}

ScalarField divergence(const VectorField2& u) {
  const SpectralField a = multiply_imag(to_spectral(u.x()), u.grid().deriv1());
  const SpectralField b = multiply_imag(to_spectral(u.y()), u.grid().deriv2());
  SpectralField sum = a;
  for (std::size_t i = 0; i < sum.coeffs().size(); ++i) {
    sum.coeffs()[i] += b.coeffs()[i];
  }
  return from_spectral(sum);
}

// --- arithmetic -------------------------------------------------------------

ScalarField axpy(const ScalarField& a, double s, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "axpy");
  RealBuffer out(a.size());
  kernels::active().axpy_out(a.data(), s, b.data(), out.data(), a.size());
  return ScalarField(a.grid_ptr(), std::move(out));
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) { return axpy(a, 1.0, b); }
ScalarField operator-(const ScalarField& a, const ScalarField& b) { return axpy(a, -1.0, b); }

ScalarField operator*(double s, const ScalarField& a) {
  RealBuffer out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = s * a.data()[i];
  }
  return ScalarField(a.grid_ptr(), std::move(out));
}

ScalarField operator-(const ScalarField& a) { return -1.0 * a; }

VectorField2 operator+(const VectorField2& a, const VectorField2& b) { return {a.x() + b.x(), a.y() + b.y()}; }
VectorField2 operator-(const VectorField2& a, const VectorField2& b) { return {a.x() - b.x(), a.y() - b.y()}; }
VectorField2 operator*(double s, const VectorField2& a) { return {s * a.x(), s * a.y()}; }
VectorField2 axpy(const VectorField2& a, double s, const VectorField2& b) {
  return {axpy(a.x(), s, b.x()), axpy(a.y(), s, b.y())};
}

bool all_finite(const ScalarField& f) {
  return std::all_of(f.values().begin(), f.values().end(), [](double v) { return std::isfinite(v); });
}

// --- TrigEvaluator ----------------------------------------------------------

TrigEvaluator::TrigEvaluator(const SpectralField& c) : grid_(c.grid_ptr()) {
  const Grid& g = *grid_;
  double cmax = 0.0;
  for (const cplx& v : c.coeffs()) {
    cmax = std::max(cmax, std::abs(v));
  }
  const double cutoff = 1e-16 * cmax;
  auto mult = g.multiplicity();
  for (int j = 0; j < g.n(); ++j) {
    for (int i = 0; i < g.half(); ++i) {
      const std::size_t idx = g.spectral_index(j, i);
      const cplx v = c.coeffs()[idx];
      if (std::abs(v) > cutoff && v != cplx(0.0, 0.0)) {
        modes_.push_back({j, i, g.xi1(i), g.xi2(j), mult[idx] * v});
      }
    }
  }
}

TrigEvaluator::TrigEvaluator(const ScalarField& f) : TrigEvaluator(to_spectral(f)) {}

double TrigEvaluator::value(Point p) const {
  double acc = 0.0;
  for (const Mode& m : modes_) {
    const double phase = m.k1 * p.x1 + m.k2 * p.x2;
    acc += m.weight.real() * std::cos(phase) - m.weight.imag() * std::sin(phase);
  }
  return acc;
}

TrigJet TrigEvaluator::jet(Point p) const {
  TrigJet out;
  for (const Mode& m : modes_) {
    const double phase = m.k1 * p.x1 + m.k2 * p.x2;
    const double cs = std::cos(phase);
    const double sn = std::sin(phase);
    // Re(w e^{i phase}) and Re(i w e^{i phase})
    const double re = m.weight.real() * cs - m.weight.imag() * sn;
    const double im = m.weight.real() * sn + m.weight.imag() * cs;
    out.value += re;
    out.d1 -= m.k1 * im;
    out.d2 -= m.k2 * im;
    out.d11 -= m.k1 * m.k1 * re;
    out.d12 -= m.k1 * m.k2 * re;
    out.d22 -= m.k2 * m.k2 * re;
  }
  return out;
}

}  // namespace sqg
