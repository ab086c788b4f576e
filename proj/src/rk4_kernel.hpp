#pragma once

// Inline kernels shared by the integrator and the keystream sampler. The
// operation order here is the one documented in engm/dynsys.hpp; do not
// "simplify" the expressions, the keystream depends on every rounding.

#include "engm/dynsys.hpp"

namespace engm::detail {

inline SystemState flow(const SystemState& s, double a, double b, double mu) noexcept {
  const double x2 = s.x * s.x;
  const double z2 = s.z * s.z;
  const double r = a * (x2 + z2);
  return {s.y, mu * s.x + s.x * (r + b * z2), s.w, mu * s.z + s.z * (r + b * x2)};
}

inline SystemState axpy(const SystemState& s, double h, const SystemState& k) noexcept {
  return {s.x + h * k.x, s.y + h * k.y, s.z + h * k.z, s.w + h * k.w};
}

inline double rk4_combine(double s, double sixth, double k1, double k2, double k3,
                          double k4) noexcept {
  return s + sixth * (((k1 + 2.0 * k2) + 2.0 * k3) + k4);
}

inline SystemState rk4(const SystemState& s, double a, double b, double mu, double dt) noexcept {
  const double half = dt / 2.0;
  const double sixth = dt / 6.0;
  const SystemState k1 = flow(s, a, b, mu);
  const SystemState k2 = flow(axpy(s, half, k1), a, b, mu);
  const SystemState k3 = flow(axpy(s, half, k2), a, b, mu);
  const SystemState k4 = flow(axpy(s, dt, k3), a, b, mu);
  return {rk4_combine(s.x, sixth, k1.x, k2.x, k3.x, k4.x),
          rk4_combine(s.y, sixth, k1.y, k2.y, k3.y, k4.y),
          rk4_combine(s.z, sixth, k1.z, k2.z, k3.z, k4.z),
          rk4_combine(s.w, sixth, k1.w, k2.w, k3.w, k4.w)};
}

}  // namespace engm::detail
