#pragma once

#include "sqg/field.hpp"

namespace sqg {

// phi(x) = x + g(x) with g periodic.
class DiffeoMap {
 public:
  explicit DiffeoMap(VectorField2 displacement);
  static DiffeoMap identity(GridPtr grid);

  const VectorField2& displacement() const { return g_; }
  const Grid& grid() const { return g_.grid(); }
  const GridPtr& grid_ptr() const { return g_.grid_ptr(); }

 private:
  VectorField2 g_;
};

inline constexpr double kJacobianFloor = 1e-6;
inline constexpr double kInverseTolerance = 1e-10;  // times L
inline constexpr int kInverseMaxIterations = 100;

enum class CompositionMethod {
  bicubic,        // periodic cubic B-spline interpolation (default)
  trigonometric,  // exact Fourier-series point evaluation, O(n^2 * modes)
};

// x -> f(phi(x))
ScalarField compose_scalar(const ScalarField& f, const DiffeoMap& phi,
                           CompositionMethod method = CompositionMethod::bicubic);
VectorField2 compose_vector(const VectorField2& u, const DiffeoMap& phi,
                            CompositionMethod method = CompositionMethod::bicubic);
// a o b
DiffeoMap compose(const DiffeoMap& a, const DiffeoMap& b, CompositionMethod method = CompositionMethod::bicubic);

// det(I + grad g) by spectral differentiation.
ScalarField jacobian_det(const DiffeoMap& phi);
// Largest singular value of I + grad g over the grid.
double max_stretch(const DiffeoMap& phi);
// Throws DiffeoError when min det falls below kJacobianFloor.
void require_diffeo(const DiffeoMap& phi);

// Fixed-point solve of h = -g(x + h), phi^{-1} = id + h. `guess` seeds h.
// Throws DiffeoError (carrying the residual) without convergence.
DiffeoMap invert_diffeo(const DiffeoMap& phi, const DiffeoMap* guess = nullptr,
                        CompositionMethod method = CompositionMethod::bicubic);
// max |phi(psi(x)) - x| over the grid.
double inversion_residual(const DiffeoMap& phi, const DiffeoMap& psi,
                          CompositionMethod method = CompositionMethod::bicubic);

// Point image phi(p) by exact evaluation of the displacement.
Point apply(const DiffeoMap& phi, Point p);

DiffeoMap axpy(const DiffeoMap& a, double s, const VectorField2& b);
// sup-norm distance of the displacements (max |g_a - g_b| pointwise)
double sup_distance(const DiffeoMap& a, const DiffeoMap& b);

}  // namespace sqg
