#include "sqg/operators.hpp"

#include <string>

#include "sqg/errors.hpp"
#include "sqg/kernels.hpp"

namespace sqg {
namespace {

std::span<const double> riesz_table(const Grid& g, int k) {
  if (k == 1) {
    return g.riesz1();
  }
  if (k == 2) {
    return g.riesz2();
  }
  throw InvalidArgument("axis must be 1 or 2, got " + std::to_string(k));
}

void check_sign(int sign) {
  if (sign != 1 && sign != -1) {
    throw InvalidArgument("commutator sign must be +1 or -1");
  }
}

SpectralField add(SpectralField a, const SpectralField& b, double s = 1.0) {
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    a.coeffs()[i] += s * b.coeffs()[i];
  }
  return a;
}

}  // namespace

OperatorWorkspace::OperatorWorkspace(GridPtr grid, bool dealias) : grid_(std::move(grid)), dealias_(dealias) {
  const std::size_t n = grid_->real_size();
  u1_.resize(n);
  u2_.resize(n);
  d1_.resize(n);
  d2_.resize(n);
  prod_.resize(n);
  scratch_.resize(grid_->spectral_size());
}

SpectralField OperatorWorkspace::band(const ScalarField& f) const {
  require_same_grid(f.grid(), *grid_, "OperatorWorkspace");
  SpectralField c = to_spectral(f);
  return dealias_ ? dealias(c) : c;
}

void OperatorWorkspace::load_velocity(const VectorField2& u) {
  const auto& fft = grid_->fft();
  if (dealias_) {
    fft.inverse(band(u.x()).coeffs().data(), u1_.data());
    fft.inverse(band(u.y()).coeffs().data(), u2_.data());
  } else {
    std::copy(u.x().values().begin(), u.x().values().end(), u1_.begin());
    std::copy(u.y().values().begin(), u.y().values().end(), u2_.begin());
  }
}

ScalarField OperatorWorkspace::transport_loaded(const SpectralField& f_hat) {
  const Grid& g = *grid_;
  const auto& k = kernels::active();
  const std::size_t m = g.spectral_size();
  k.mul_imag(g.deriv1().data(), f_hat.coeffs().data(), scratch_.data(), m);
  g.fft().inverse(scratch_.data(), d1_.data());
  k.mul_imag(g.deriv2().data(), f_hat.coeffs().data(), scratch_.data(), m);
  g.fft().inverse(scratch_.data(), d2_.data());
  k.dot2(u1_.data(), d1_.data(), u2_.data(), d2_.data(), prod_.data(), g.real_size());
  if (!dealias_) {
    return ScalarField(grid_, RealBuffer(prod_.begin(), prod_.end()));
  }
  SpectralField p(grid_);
  g.fft().forward(prod_.data(), p.coeffs().data());
  return from_spectral(dealias(p));
}

ScalarField OperatorWorkspace::transport(const VectorField2& u, const ScalarField& f) {
  require_same_grid(u.grid(), *grid_, "transport");
  load_velocity(u);
  return transport_loaded(band(f));
}

ScalarField OperatorWorkspace::transport_commutator(const VectorField2& u, int k, const ScalarField& theta,
                                                    int sign) {
  check_sign(sign);
  require_same_grid(u.grid(), *grid_, "transport_commutator");
  const auto rk = riesz_table(*grid_, k);
  load_velocity(u);
  const SpectralField th = band(theta);
  // branch 1: (u . grad)(sign R_k theta)
  SpectralField rth = multiply_imag(th, rk);
  const ScalarField first = transport_loaded(rth);
  // branch 2: sign R_k ((u . grad) theta)
  const ScalarField inner = transport_loaded(th);
  const SpectralField second = multiply_imag(to_spectral(inner), rk);
  const SpectralField diff = add(to_spectral(first), second, -1.0);
  return sign > 0 ? from_spectral(diff) : -from_spectral(diff);
}

VectorField2 OperatorWorkspace::b_operator(const VectorField2& u) {
  require_same_grid(u.grid(), *grid_, "b_operator");
  const ScalarField theta = theta_from_u(u);
  return VectorField2(transport_commutator(u, 2, theta, -1), transport_commutator(u, 1, theta, +1));
}

ScalarField riesz(const ScalarField& f, int k) {
  return from_spectral(multiply_imag(to_spectral(f), riesz_table(f.grid(), k)));
}

VectorField2 velocity_from_theta(const ScalarField& theta) {
  const Grid& g = theta.grid();
  const SpectralField c = to_spectral(theta);
  return VectorField2(-from_spectral(multiply_imag(c, g.riesz2())), from_spectral(multiply_imag(c, g.riesz1())));
}

ScalarField theta_from_u(const VectorField2& u) {
  const Grid& g = u.grid();
  const SpectralField a = multiply_imag(to_spectral(u.x()), g.riesz2());
  const SpectralField b = multiply_imag(to_spectral(u.y()), g.riesz1());
  return from_spectral(add(a, b, -1.0));
}

ScalarField div_diagnostic(const VectorField2& u) {
  const Grid& g = u.grid();
  const SpectralField a = multiply_imag(to_spectral(u.x()), g.riesz1());
  const SpectralField b = multiply_imag(to_spectral(u.y()), g.riesz2());
  return from_spectral(add(a, b));
}

ScalarField transport(const VectorField2& u, const ScalarField& f, bool dealias) {
  return OperatorWorkspace(u.grid_ptr(), dealias).transport(u, f);
}

VectorField2 transport(const VectorField2& u, const VectorField2& w, bool dealias) {
  OperatorWorkspace ws(u.grid_ptr(), dealias);
  ScalarField a = ws.transport(u, w.x());
  ScalarField b = ws.transport(u, w.y());
  return VectorField2(std::move(a), std::move(b));
}

ScalarField transport_commutator(const VectorField2& u, int k, const ScalarField& theta, int sign, bool dealias) {
  return OperatorWorkspace(u.grid_ptr(), dealias).transport_commutator(u, k, theta, sign);
}

VectorField2 b_operator(const VectorField2& u, bool dealias) {
  return OperatorWorkspace(u.grid_ptr(), dealias).b_operator(u);
}

}  // namespace sqg
