// sqg_operators: Riesz transforms, velocity law, transport and the B operator.

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "sqg/errors.hpp"
#include "sqg/eulerian.hpp"
#include "sqg/operators.hpp"
#include "sqg/random_fields.hpp"

using namespace sqg;
using std::numbers::pi;

namespace {

ScalarField smooth(GridPtr g, std::uint64_t seed, int kmax = 4) { return random_band_limited(g, seed, {kmax, 2.0, 1.0}); }

ScalarField rough(GridPtr g, std::uint64_t seed) {
  CounterRng rng(seed);
  RealBuffer v(g->real_size());
  for (auto& x : v) {
    x = rng.normal();
  }
  return ScalarField(g, std::move(v));
}

}  // namespace

TEST_CASE("riesz matches direct summation, Nyquist included") {
  const GridPtr g = make_grid(16, 3.0);
  const ScalarField f = rough(g, 1);
  for (int k : {1, 2}) {
    CAPTURE(k);
    CHECK(oracle::max_abs_diff(riesz(f, k), oracle::riesz(f, k)) < 1e-13);
  }
  CHECK_THROWS_AS(riesz(f, 3), InvalidArgument);
}

TEST_CASE("riesz of a cosine along x1") {
  // R_1 cos(a x1) = -sin(a x1), R_2 cos(a x1) = 0
  const GridPtr g = make_grid(32, 2 * pi);
  const ScalarField f = ScalarField::from_function(g, [](double x1, double) { return std::cos(3 * x1); });
  const ScalarField s = ScalarField::from_function(g, [](double x1, double) { return -std::sin(3 * x1); });
  CHECK(oracle::max_abs_diff(riesz(f, 1), s) < 1e-14);
  CHECK(grid_max_abs(riesz(f, 2)) < 1e-15);
  const VectorField2 u = velocity_from_theta(f);
  CHECK(grid_max_abs(u.x()) < 1e-15);
  CHECK(oracle::max_abs_diff(u.y(), s) < 1e-14);
}

TEST_CASE("-R1^2 - R2^2 is the identity on mean-zero band-limited fields") {
  const GridPtr g = make_grid(64, 5.0);
  const ScalarField f = smooth(g, 2, 10);
  const ScalarField back = -1.0 * (riesz(riesz(f, 1), 1) + riesz(riesz(f, 2), 2));
  CHECK(oracle::rel_l2(back, f) < 1e-14);
}

TEST_CASE("riesz transforms are anti-self-adjoint") {
  const GridPtr g = make_grid(32, 2.0);
  const ScalarField f = rough(g, 3);
  const ScalarField h = rough(g, 4);
  for (int k : {1, 2}) {
    const double lhs = inner_product(riesz(f, k), h);
    const double rhs = -inner_product(f, riesz(h, k));
    CHECK(std::abs(lhs - rhs) <= 1e-13 * l2_norm(f) * l2_norm(h));
  }
}

TEST_CASE("velocity is divergence free and inverts through theta_from_u") {
  const GridPtr g = make_grid(64, 2 * pi);
  const ScalarField theta = smooth(g, 5);
  const VectorField2 u = velocity_from_theta(theta);
  CHECK(l2_norm(divergence(u)) / l2_norm(u) < 1e-14);
  CHECK(l2_norm(div_diagnostic(u)) / l2_norm(u) < 1e-15);
  CHECK(oracle::rel_l2(theta_from_u(u), theta) < 1e-14);
  // |u| = |theta| mode by mode, so the L2 norms agree
  CHECK(l2_norm(u) == doctest::Approx(l2_norm(theta)).epsilon(1e-13));
}

TEST_CASE("div_diagnostic sees a gradient field") {
  // u = grad p gives Phi = R.u = -Lambda p, nonzero
  const GridPtr g = make_grid(32, 2 * pi);
  const ScalarField p = ScalarField::from_function(g, [](double x1, double x2) { return std::sin(x1 + x2); });
  const ScalarField phi = div_diagnostic(gradient(p));
  CHECK(oracle::max_abs_diff(phi, (-std::sqrt(2.0)) * p) < 1e-13);
}

TEST_CASE("transport of a product of modes is exact") {
  // u = (sin x2, 0), f = sin x1: (u . grad) f = sin x2 cos x1
  const GridPtr g = make_grid(32, 2 * pi);
  const VectorField2 u(ScalarField::from_function(g, [](double, double x2) { return std::sin(x2); }), ScalarField(g));
  const ScalarField f = ScalarField::from_function(g, [](double x1, double) { return std::sin(x1); });
  const ScalarField expect =
      ScalarField::from_function(g, [](double x1, double x2) { return std::sin(x2) * std::cos(x1); });
  CHECK(oracle::max_abs_diff(transport(u, f), expect) < 1e-14);
  CHECK(oracle::max_abs_diff(transport(u, f, false), expect) < 1e-14);
}

TEST_CASE("dealiased transport projects the product onto the band") {
  // on a 24 grid the band is |m| <= 8; cos 7x * 3 cos 3x = 1.5 (cos 10x + cos 4x)
  const GridPtr g = make_grid(24, 2 * pi);
  const VectorField2 u(ScalarField::from_function(g, [](double x1, double) { return std::cos(7 * x1); }),
                       ScalarField(g));
  const ScalarField f = ScalarField::from_function(g, [](double x1, double) { return std::sin(3 * x1); });
  const ScalarField band = ScalarField::from_function(g, [](double x1, double) { return 1.5 * std::cos(4 * x1); });
  const ScalarField full = ScalarField::from_function(
      g, [](double x1, double) { return 1.5 * (std::cos(4 * x1) + std::cos(10 * x1)); });
  CHECK(oracle::max_abs_diff(transport(u, f), band) < 1e-13);
  CHECK(oracle::max_abs_diff(transport(u, f, false), full) < 1e-13);
}

TEST_CASE("commutator and B vanish for constant velocity") {
  const GridPtr g = make_grid(32, 3.0);
  const VectorField2 c(ScalarField::constant(g, 0.7), ScalarField::constant(g, -0.2));
  const ScalarField theta = smooth(g, 6);
  for (int k : {1, 2}) {
    CHECK(grid_max_abs(transport_commutator(c, k, theta, 1)) < 1e-13);
  }
  CHECK(grid_max_abs(b_operator(c)) < 1e-13);
}

TEST_CASE("commutator is odd in the sign argument") {
  const GridPtr g = make_grid(32, 2 * pi);
  const VectorField2 u = velocity_from_theta(smooth(g, 7));
  const ScalarField theta = smooth(g, 8);
  CHECK(oracle::max_abs_diff(transport_commutator(u, 1, theta, -1), -1.0 * transport_commutator(u, 1, theta, 1)) <
        1e-14);
}

TEST_CASE("B matches the commutator definition") {
  const GridPtr g = make_grid(32, 2 * pi);
  const VectorField2 u = velocity_from_theta(smooth(g, 9));
  const ScalarField theta = theta_from_u(u);
  // first component [u . grad, -R2] theta, second [u . grad, R1] theta
  const ScalarField b1 = transport(u, -1.0 * riesz(theta, 2)) - (-1.0 * riesz(transport(u, theta), 2));
  const ScalarField b2 = transport(u, riesz(theta, 1)) - riesz(transport(u, theta), 1);
  const VectorField2 b = b_operator(u);
  CHECK(oracle::max_abs_diff(b.x(), b1) < 1e-13);
  CHECK(oracle::max_abs_diff(b.y(), b2) < 1e-13);
}

TEST_CASE("u-form right side is the velocity of the theta-form right side") {
  const GridPtr g = make_grid(64, 2 * pi);
  const ScalarField theta = smooth(g, 10);
  const VectorField2 u = velocity_from_theta(theta);
  const VectorField2 lhs = rhs_u(u);
  const VectorField2 rhs = velocity_from_theta(rhs_theta(theta));
  CHECK(oracle::rel_l2(lhs, rhs) < 1e-13);
}

TEST_CASE("shear flow is steady") {
  const GridPtr g = make_grid(32, 2 * pi);
  const ScalarField theta = ScalarField::from_function(g, [](double x1, double) { return std::sin(2 * x1); });
  CHECK(grid_max_abs(rhs_theta(theta)) < 1e-14);
  CHECK(grid_max_abs(rhs_u(velocity_from_theta(theta))) < 1e-14);
}

TEST_CASE("workspace is reusable and deterministic") {
  const GridPtr g = make_grid(32, 2 * pi);
  OperatorWorkspace ws(g);
  const VectorField2 u = velocity_from_theta(smooth(g, 11));
  const ScalarField f = smooth(g, 12);
  const ScalarField a = ws.transport(u, f);
  ws.b_operator(u);
  const ScalarField b = ws.transport(u, f);
  CHECK(oracle::max_abs_diff(a, b) == 0.0);
  CHECK(ws.dealiasing());
}
