#pragma once

#include <utility>

namespace sqg {

// One classical RK4 step. S needs a free function axpy(S, double, S) -> S;
// `project` is applied to every stage value and to the result.
template <class S, class Rhs, class Project>
S rk4_step(const S& y, double dt, Rhs&& rhs, Project&& project) {
  const S k1 = rhs(y);
  const S k2 = rhs(project(axpy(y, 0.5 * dt, k1)));
  const S k3 = rhs(project(axpy(y, 0.5 * dt, k2)));
  const S k4 = rhs(project(axpy(y, dt, k3)));
  S sum = axpy(axpy(k1, 2.0, k2), 2.0, k3);
  sum = axpy(sum, 1.0, k4);
  return project(axpy(y, dt / 6.0, sum));
}

}  // namespace sqg
