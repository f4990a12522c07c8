#pragma once

#include "sqg/field.hpp"

namespace sqg {

// Scratch for the pseudo-spectral products. One per thread; the methods are
// deterministic and leave no state behind except buffer capacity.
//
// With dealiasing on, every product input is projected onto the 2/3 band
// (Grid::dealias_mask) first and the product is projected again afterwards.
class OperatorWorkspace {
 public:
  explicit OperatorWorkspace(GridPtr grid, bool dealias = true);

  const Grid& grid() const { return *grid_; }
  bool dealiasing() const { return dealias_; }

  // (u . grad) f
  ScalarField transport(const VectorField2& u, const ScalarField& f);
  // (u . grad)(sign R_k theta) - sign R_k ((u . grad) theta)
  ScalarField transport_commutator(const VectorField2& u, int k, const ScalarField& theta, int sign);
  // ([u . grad, -R_2] theta, [u . grad, R_1] theta) with theta = R_2 u_1 - R_1 u_2
  VectorField2 b_operator(const VectorField2& u);

 private:
  SpectralField band(const ScalarField& f) const;
  // physical samples of the band-limited (or raw) input
  void load_velocity(const VectorField2& u);
  ScalarField transport_loaded(const SpectralField& f_hat);

  GridPtr grid_;
  bool dealias_;
  RealBuffer u1_;
  RealBuffer u2_;
  RealBuffer d1_;
  RealBuffer d2_;
  RealBuffer prod_;
  ComplexBuffer scratch_;
};

// R_k f, multiplier i xi_k / |xi|; k in {1, 2}.
ScalarField riesz(const ScalarField& f, int k);

// u = (-R_2 theta, R_1 theta)
VectorField2 velocity_from_theta(const ScalarField& theta);
// theta = R_2 u_1 - R_1 u_2
ScalarField theta_from_u(const VectorField2& u);
// Phi = R_1 u_1 + R_2 u_2
ScalarField div_diagnostic(const VectorField2& u);

ScalarField transport(const VectorField2& u, const ScalarField& f, bool dealias = true);
VectorField2 transport(const VectorField2& u, const VectorField2& w, bool dealias = true);
ScalarField transport_commutator(const VectorField2& u, int k, const ScalarField& theta, int sign,
                                 bool dealias = true);
VectorField2 b_operator(const VectorField2& u, bool dealias = true);

}  // namespace sqg
