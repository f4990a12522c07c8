// lagrangian_flow: spline interpolation, composition, inversion, Jacobians
// and the geodesic solver against the Eulerian one.

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "sqg/errors.hpp"
#include "sqg/geodesic.hpp"
#include "sqg/interpolation.hpp"
#include "sqg/random_fields.hpp"

using namespace sqg;
using std::numbers::pi;

namespace {

ScalarField smooth(GridPtr g, std::uint64_t seed, int kmax = 4, double l2 = 1.0) {
  return random_band_limited(g, seed, {kmax, 2.0, l2});
}

DiffeoMap shift(GridPtr g, double c1, double c2) {
  return DiffeoMap(VectorField2(ScalarField::constant(g, c1), ScalarField::constant(g, c2)));
}

// phi(x) = x + (a sin x2, 0): area preserving shear
DiffeoMap shear(GridPtr g, double a) {
  return DiffeoMap(VectorField2(ScalarField::from_function(g, [a](double, double x2) { return a * std::sin(x2); }),
                                ScalarField(g)));
}

TimeStepConfig steps_of(double dt, double t_end) {
  TimeStepConfig c;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

}  // namespace

TEST_CASE("spline interpolant reproduces the samples") {
  const GridPtr g = make_grid(32, 3.0);
  const ScalarField f = smooth(g, 1, 8);
  const SplineInterpolant s(f);
  double err = 0.0;
  for (int j = 0; j < 32; j += 3) {
    for (int i = 0; i < 32; i += 5) {
      err = std::max(err, std::abs(s({g->x(i), g->x(j)}) - f.at(i, j)));
    }
  }
  CHECK(err < 1e-13);
}

TEST_CASE("spline interpolation error falls at fourth order") {
  const double L = 2 * pi;
  auto fn = [](double x1, double x2) { return std::sin(x1 + 2 * x2) + std::cos(3 * x1); };
  auto err = [&](int n) {
    const GridPtr g = make_grid(n, L);
    const SplineInterpolant s(ScalarField::from_function(g, fn));
    double e = 0.0;
    for (int k = 0; k < 200; ++k) {
      const Point p{0.031 * k + 0.017, 0.047 * k + 0.003};
      e = std::max(e, std::abs(s(p) - fn(p.x1, p.x2)));
    }
    return e;
  };
  CHECK(std::log2(err(32) / err(64)) > 3.7);
}

TEST_CASE("batched and single-point spline evaluation agree") {
  const GridPtr g = make_grid(32, 2.0);
  const SplineInterpolant s(smooth(g, 2));
  std::vector<double> px{0.1, -3.3, 1.99, 7.5}, py{0.5, 0.25, -0.75, 2.0}, out(4);
  s.evaluate(px, py, out);
  for (std::size_t i = 0; i < px.size(); ++i) {
    CHECK(out[i] == doctest::Approx(s({px[i], py[i]})).epsilon(1e-15));
  }
}

TEST_CASE("composition with the identity and with grid shifts is exact") {
  const GridPtr g = make_grid(32, 2 * pi);
  const ScalarField f = smooth(g, 3);
  CHECK(oracle::max_abs_diff(compose_scalar(f, DiffeoMap::identity(g)), f) < 1e-13);
  // shift by three cells: f(x + 3 dx) is a re-indexing
  const ScalarField shifted = compose_scalar(f, shift(g, 3 * g->dx(), 0.0));
  CHECK(std::abs(shifted.at(0, 5) - f.at(3, 5)) < 1e-13);
  CHECK(std::abs(shifted.at(30, 7) - f.at(1, 7)) < 1e-13);
}

TEST_CASE("trigonometric composition is exact for band-limited fields") {
  const GridPtr g = make_grid(32, 2 * pi);
  auto fn = [](double x1, double x2) { return std::sin(x1) * std::cos(2 * x2); };
  const ScalarField f = ScalarField::from_function(g, fn);
  const DiffeoMap phi = shear(g, 0.3);
  const ScalarField exact = ScalarField::from_function(g, [&](double x1, double x2) { return fn(x1 + 0.3 * std::sin(x2), x2); });
  CHECK(oracle::max_abs_diff(compose_scalar(f, phi, CompositionMethod::trigonometric), exact) < 1e-13);
  CHECK(oracle::max_abs_diff(compose_scalar(f, phi), exact) < 1e-4);
}

TEST_CASE("jacobian of the identity and of a shear is one") {
  const GridPtr g = make_grid(32, 2 * pi);
  CHECK(oracle::max_abs_diff(jacobian_det(DiffeoMap::identity(g)), ScalarField::constant(g, 1.0)) == 0.0);
  CHECK(oracle::max_abs_diff(jacobian_det(shear(g, 0.8)), ScalarField::constant(g, 1.0)) < 1e-14);
  CHECK(max_stretch(DiffeoMap::identity(g)) == doctest::Approx(1.0));
  // singular values of [[1, 0.8 cos x2], [0, 1]] peak where |cos x2| = 1
  const double a = 0.8;
  CHECK(max_stretch(shear(g, a)) == doctest::Approx((a + std::sqrt(a * a + 4)) / 2).epsilon(1e-12));
}

TEST_CASE("folded maps are rejected") {
  const GridPtr g = make_grid(32, 2 * pi);
  const DiffeoMap fold(VectorField2(ScalarField::from_function(g, [](double x1, double) { return 2 * std::sin(x1); }),
                                    ScalarField(g)));
  CHECK_THROWS_AS(require_diffeo(fold), DiffeoError);
  CHECK_NOTHROW(require_diffeo(shear(g, 0.5)));
}

TEST_CASE("inverse of a shear is the opposite shear") {
  const GridPtr g = make_grid(64, 2 * pi);
  const DiffeoMap phi = shear(g, 0.4);
  const DiffeoMap inv = invert_diffeo(phi);
  CHECK(sup_distance(inv, shear(g, -0.4)) < 1e-6);
  CHECK(inversion_residual(phi, inv) < 1e-9 * 2 * pi);
  const DiffeoMap inv_exact = invert_diffeo(phi, nullptr, CompositionMethod::trigonometric);
  CHECK(sup_distance(inv_exact, shear(g, -0.4)) < 1e-9);
}

TEST_CASE("inversion warm start reaches the same answer") {
  const GridPtr g = make_grid(64, 2 * pi);
  const ScalarField p = smooth(g, 4, 3, 0.15);
  const DiffeoMap phi(velocity_from_theta(p));
  const DiffeoMap cold = invert_diffeo(phi);
  const DiffeoMap warm = invert_diffeo(phi, &cold);
  CHECK(sup_distance(cold, warm) < 1e-9);
}

TEST_CASE("compose of a map with its inverse is the identity") {
  const GridPtr g = make_grid(64, 2 * pi);
  const DiffeoMap phi = shear(g, 0.3);
  const DiffeoMap id = compose(phi, invert_diffeo(phi));
  CHECK(sup_distance(id, DiffeoMap::identity(g)) < 1e-9);
}

TEST_CASE("apply evaluates the displacement exactly") {
  const GridPtr g = make_grid(32, 2 * pi);
  const Point p{1.234, 5.678};
  const Point q = apply(shear(g, 0.5), p);
  CHECK(q.x1 == doctest::Approx(p.x1 + 0.5 * std::sin(p.x2)).epsilon(1e-14));
  CHECK(q.x2 == doctest::Approx(p.x2));
  const Point r = apply(DiffeoMap::identity(g), p);
  CHECK(r.x1 == p.x1);
  CHECK(r.x2 == p.x2);
}

TEST_CASE("exp(0) is exactly the identity") {
  const GridPtr g = make_grid(32, 2 * pi);
  const DiffeoMap phi = exp_map(VectorField2::zeros(g), 1.0, steps_of(0.0, 1.0));
  CHECK(grid_max_abs(phi.displacement()) == 0.0);
}

TEST_CASE("geodesic flow of a steady shear translates particles") {
  // theta = sin x1 gives u = (0, -sin x1), steady; phi(t) = x + t u(x)
  const GridPtr g = make_grid(32, 2 * pi);
  const ScalarField theta = ScalarField::from_function(g, [](double x1, double) { return std::sin(x1); });
  const VectorField2 u = velocity_from_theta(theta);
  const DiffeoMap phi = flow_map(u, 0.5, steps_of(0.05, 0.5));
  CHECK(l2_norm(phi.displacement() - 0.5 * u) < 1e-12);
}

TEST_CASE("Lagrangian velocity matches the Eulerian solver") {
  const GridPtr g = make_grid(64, 2 * pi);
  const ScalarField theta0 = smooth(g, 5);
  const VectorField2 u0 = velocity_from_theta(theta0);
  TimeStepConfig c = steps_of(0.0, 0.1);
  const EulerianTrajectory eu = solve_u(u0, c);
  c.dt = eu.dt;
  const GeodesicTrajectory lag = solve_geodesic(u0, c);
  CHECK(lag.steps == eu.steps);
  const VectorField2 u_lag = eulerian_velocity(lag.final_state());
  CHECK(l2_norm(u_lag - eu.final_u()) < 1e-3 * l2_norm(u0));
  CHECK(max_stretch(lag.final_state().phi) > 1.0);
}

TEST_CASE("geodesic flow preserves area") {
  const GridPtr g = make_grid(64, 2 * pi);
  const GeodesicTrajectory lag = solve_geodesic(velocity_from_theta(smooth(g, 6)), steps_of(0.0, 0.2));
  const ScalarField det = jacobian_det(lag.final_state().phi);
  CHECK(oracle::max_abs_diff(det, ScalarField::constant(g, 1.0)) < 1e-4);
}

TEST_CASE("transport through the flow matches the Eulerian theta") {
  const GridPtr g = make_grid(64, 2 * pi);
  const ScalarField theta0 = smooth(g, 7);
  TimeStepConfig c = steps_of(0.0, 0.2);
  const EulerianTrajectory eu = solve_theta(theta0, c);
  c.dt = eu.dt;
  const ScalarField via = solve_via_flow(theta0, 0.2, c);
  CHECK(l2_norm(via - eu.final_theta()) < 1e-3 * l2_norm(theta0));
}

TEST_CASE("solve_via_flow carries the mean and maps zero to zero") {
  const GridPtr g = make_grid(32, 2 * pi);
  CHECK(grid_max_abs(solve_via_flow(ScalarField(g), 1.0, steps_of(0.0, 1.0))) == 0.0);
  const ScalarField c = ScalarField::constant(g, 0.25);
  CHECK(oracle::max_abs_diff(solve_via_flow(c, 1.0, steps_of(0.0, 1.0)), c) < 1e-15);
}

TEST_CASE("exp_map(u, t) equals the flow of u over [0, t]") {
  const GridPtr g = make_grid(32, 2 * pi);
  const VectorField2 u = velocity_from_theta(smooth(g, 8, 3));
  const TimeStepConfig c = steps_of(0.0, 1.0);
  const DiffeoMap a = exp_map(u, 0.3, c);
  const DiffeoMap b = flow_map(u, 0.3, c);
  CHECK(sup_distance(a, b) < 1e-6 * g->box_length());
}

TEST_CASE("geodesic solver aborts on CFL violation") {
  const GridPtr g = make_grid(32, 2 * pi);
  CHECK_THROWS_AS(solve_geodesic(velocity_from_theta(smooth(g, 9)), steps_of(2.0, 4.0)), SolverAbort);
}
