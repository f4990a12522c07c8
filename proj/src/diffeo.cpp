#include "sqg/diffeo.hpp"

#include <algorithm>
#include <optional>
#include <cmath>
#include <cstdio>
#include <string>

#include "sqg/errors.hpp"
#include "sqg/interpolation.hpp"

namespace sqg {
namespace {

// Grid points displaced by g: px = x1 + g1, py = x2 + g2.
void displaced_points(const VectorField2& g, RealBuffer& px, RealBuffer& py) {
  const Grid& grid = g.grid();
  const int n = grid.n();
  px.resize(grid.real_size());
  py.resize(grid.real_size());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * n + i;
      px[idx] = grid.x(i) + g.x().data()[idx];
      py[idx] = grid.x(j) + g.y().data()[idx];
    }
  }
}

// Evaluates one field at arbitrary points, by the chosen method.
class PointSampler {
 public:
  PointSampler(const ScalarField& f, CompositionMethod method) : grid_(f.grid_ptr()), method_(method) {
    if (method == CompositionMethod::bicubic) {
      spline_.emplace(f);
    } else {
      trig_.emplace(f);
    }
  }

  ScalarField sample(const RealBuffer& px, const RealBuffer& py) const {
    RealBuffer out(px.size());
    if (method_ == CompositionMethod::bicubic) {
      spline_->evaluate(px, py, out);
    } else {
      for (std::size_t i = 0; i < px.size(); ++i) {
        out[i] = trig_->value({px[i], py[i]});
      }
    }
    return ScalarField(grid_, std::move(out));
  }

 private:
  GridPtr grid_;
  CompositionMethod method_;
  std::optional<SplineInterpolant> spline_;
  std::optional<TrigEvaluator> trig_;
};

}  // namespace

DiffeoMap::DiffeoMap(VectorField2 displacement) : g_(std::move(displacement)) {}

DiffeoMap DiffeoMap::identity(GridPtr grid) { return DiffeoMap(VectorField2::zeros(std::move(grid))); }

ScalarField compose_scalar(const ScalarField& f, const DiffeoMap& phi, CompositionMethod method) {
  require_same_grid(f.grid(), phi.grid(), "compose_scalar");
  RealBuffer px;
  RealBuffer py;
  displaced_points(phi.displacement(), px, py);
  return PointSampler(f, method).sample(px, py);
}

VectorField2 compose_vector(const VectorField2& u, const DiffeoMap& phi, CompositionMethod method) {
  require_same_grid(u.grid(), phi.grid(), "compose_vector");
  RealBuffer px;
  RealBuffer py;
  displaced_points(phi.displacement(), px, py);
  ScalarField a = PointSampler(u.x(), method).sample(px, py);
  ScalarField b = PointSampler(u.y(), method).sample(px, py);
  return VectorField2(std::move(a), std::move(b));
}

DiffeoMap compose(const DiffeoMap& a, const DiffeoMap& b, CompositionMethod method) {
  return DiffeoMap(b.displacement() + compose_vector(a.displacement(), b, method));
}

namespace {

struct JacobianFields {
  VectorField2 grad1;  // grad g1
  VectorField2 grad2;  // grad g2
};

JacobianFields jacobian_fields(const DiffeoMap& phi) {
  return {gradient(phi.displacement().x()), gradient(phi.displacement().y())};
}

}  // namespace

ScalarField jacobian_det(const DiffeoMap& phi) {
  const JacobianFields jf = jacobian_fields(phi);
  RealBuffer out(phi.grid().real_size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double a = 1.0 + jf.grad1.x().data()[i];
    const double b = jf.grad1.y().data()[i];
    const double c = jf.grad2.x().data()[i];
    const double d = 1.0 + jf.grad2.y().data()[i];
    out[i] = a * d - b * c;
  }
  return ScalarField(phi.grid_ptr(), std::move(out));
}

double max_stretch(const DiffeoMap& phi) {
  const JacobianFields jf = jacobian_fields(phi);
  double best = 0.0;
  for (std::size_t i = 0; i < phi.grid().real_size(); ++i) {
    const double a = 1.0 + jf.grad1.x().data()[i];
    const double b = jf.grad1.y().data()[i];
    const double c = jf.grad2.x().data()[i];
    const double d = 1.0 + jf.grad2.y().data()[i];
    const double fro = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    const double disc = std::sqrt(std::max(0.0, fro * fro - 4.0 * det * det));
    best = std::max(best, std::sqrt(0.5 * (fro + disc)));
  }
  return best;
}

void require_diffeo(const DiffeoMap& phi) {
  const ScalarField det = jacobian_det(phi);
  const double lo = *std::min_element(det.values().begin(), det.values().end());
  if (!(lo > kJacobianFloor)) {
    throw DiffeoError("not a diffeomorphism at this resolution: min det(dphi) = " + std::to_string(lo));
  }
}

DiffeoMap invert_diffeo(const DiffeoMap& phi, const DiffeoMap* guess, CompositionMethod method) {
  require_diffeo(phi);
  const Grid& grid = phi.grid();
  const std::size_t size = grid.real_size();
  const double tol = kInverseTolerance * grid.box_length();
  const PointSampler s1(phi.displacement().x(), method);
  const PointSampler s2(phi.displacement().y(), method);

  RealBuffer h1(size, 0.0);
  RealBuffer h2(size, 0.0);
  if (guess != nullptr) {
    require_same_grid(guess->grid(), grid, "invert_diffeo");
    std::copy(guess->displacement().x().values().begin(), guess->displacement().x().values().end(), h1.begin());
    std::copy(guess->displacement().y().values().begin(), guess->displacement().y().values().end(), h2.begin());
  }

  const int n = grid.n();
  RealBuffer px(size);
  RealBuffer py(size);
  double damping = 1.0;
  double previous = INFINITY;
  double residual = INFINITY;
  for (int it = 0; it <= kInverseMaxIterations; ++it) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = static_cast<std::size_t>(j) * n + i;
        px[idx] = grid.x(i) + h1[idx];
        py[idx] = grid.x(j) + h2[idx];
      }
    }
    const ScalarField g1 = s1.sample(px, py);
    const ScalarField g2 = s2.sample(px, py);
    residual = 0.0;
    for (std::size_t k = 0; k < size; ++k) {
      residual = std::max(residual, std::hypot(h1[k] + g1.data()[k], h2[k] + g2.data()[k]));
    }
    if (!std::isfinite(residual)) {
      break;
    }
    if (residual <= tol) {
      return DiffeoMap(VectorField2(ScalarField(phi.grid_ptr(), std::move(h1)),
                                    ScalarField(phi.grid_ptr(), std::move(h2))));
    }
    if (residual > previous && damping == 1.0) {
      damping = 0.5;
    }
    previous = residual;
    for (std::size_t k = 0; k < size; ++k) {
      h1[k] += damping * (-g1.data()[k] - h1[k]);
      h2[k] += damping * (-g2.data()[k] - h2[k]);
    }
  }
  char detail[64];
  std::snprintf(detail, sizeof detail, "%.3e", residual);
  throw DiffeoError("inverse did not converge in " + std::to_string(kInverseMaxIterations) +
                        " iterations; residual " + detail,
                    residual);
}

double inversion_residual(const DiffeoMap& phi, const DiffeoMap& psi, CompositionMethod method) {
  // phi(psi(x)) - x = h(x) + g(x + h(x))
  const VectorField2 gpsi = compose_vector(phi.displacement(), psi, method);
  const VectorField2 r = psi.displacement() + gpsi;
  return grid_max_abs(r);
}

Point apply(const DiffeoMap& phi, Point p) {
  const TrigEvaluator e1(phi.displacement().x());
  const TrigEvaluator e2(phi.displacement().y());
  return {p.x1 + e1.value(p), p.x2 + e2.value(p)};
}

DiffeoMap axpy(const DiffeoMap& a, double s, const VectorField2& b) {
  return DiffeoMap(axpy(a.displacement(), s, b));
}

double sup_distance(const DiffeoMap& a, const DiffeoMap& b) {
  return grid_max_abs(a.displacement() - b.displacement());
}

}  // namespace sqg
