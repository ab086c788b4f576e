#pragma once

#include <cstddef>
#include <vector>

namespace engm {

/// Point (x, y, z, w) of the four-variable flow
///
///   x' = y
///   y' = mu*x + x*(a*(x^2 + z^2) + b*z^2)
///   z' = w
///   w' = mu*z + z*(a*(x^2 + z^2) + b*x^2)
struct SystemState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double w = 0.0;

  bool finite() const noexcept;
  double max_norm() const noexcept;

  friend bool operator==(const SystemState&, const SystemState&) = default;
};

/// (x, y, z, w) -> (z, w, x, y).
SystemState swap_pairs(const SystemState& s) noexcept;
/// (x, y, z, w) -> (-x, -y, z, w).
SystemState negate_xy(const SystemState& s) noexcept;
/// (x, y, z, w) -> (x, y, -z, -w).
SystemState negate_zw(const SystemState& s) noexcept;

class SystemParams {
 public:
  /// Parameters for keystream use: requires a < 0, b > 0, mu > 0 and
  /// dt in (0, 0.1]. Throws Error(InvalidArgument) otherwise.
  static SystemParams chaotic(double a, double b, double mu, double dt);

  /// Any finite (a, b, mu) with dt in (0, 0.1]. Used for the linear and
  /// near-integrable control systems in verification runs.
  static SystemParams unconstrained(double a, double b, double mu, double dt);

  /// Version-1 defaults: a = -1, b = 0.5, mu = 4, dt = 0.1.
  static SystemParams defaults();

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double mu() const noexcept { return mu_; }
  double dt() const noexcept { return dt_; }

  /// True when the sign constraints of chaotic() hold.
  bool satisfies_sign_constraints() const noexcept;

  friend bool operator==(const SystemParams&, const SystemParams&) = default;

 private:
  SystemParams(double a, double b, double mu, double dt) : a_(a), b_(b), mu_(mu), dt_(dt) {}

  double a_;
  double b_;
  double mu_;
  double dt_;
};

/// Time derivative of `s`, evaluated in binary64 exactly in this order:
///   r  = a*(x*x + z*z)
///   y' = mu*x + x*(r + b*(z*z))
///   w' = mu*z + z*(r + b*(x*x))
SystemState deriv(const SystemState& s, const SystemParams& p) noexcept;

/// One classical Runge-Kutta step of size p.dt():
///   k1 = f(s), k2 = f(s + (dt/2)*k1), k3 = f(s + (dt/2)*k2), k4 = f(s + dt*k3)
///   s' = s + (dt/6) * (((k1 + 2*k2) + 2*k3) + k4)      (component-wise)
/// The order above is part of the keystream contract.
/// Throws Error(Overflow) if any output component is not finite.
SystemState rk4_step(const SystemState& s, const SystemParams& p);

/// States s0, s1, ..., sn sampled every dt. Immutable once built.
class Trajectory {
 public:
  Trajectory(std::vector<SystemState> states, double dt);

  std::size_t size() const noexcept { return states_.size(); }
  double dt() const noexcept { return dt_; }
  const SystemState& operator[](std::size_t i) const { return states_[i]; }
  const SystemState& front() const { return states_.front(); }
  const SystemState& back() const { return states_.back(); }
  auto begin() const noexcept { return states_.begin(); }
  auto end() const noexcept { return states_.end(); }

 private:
  std::vector<SystemState> states_;
  double dt_;
};

/// n RK4 steps from s0; the result holds n + 1 states. n must be >= 1.
/// Overflow errors name the step index at which the state stopped being finite.
Trajectory integrate(const SystemState& s0, const SystemParams& p, std::size_t n);

/// Largest Lyapunov exponent (per unit time) from the variational equation:
/// the tangent vector is carried alongside the trajectory with the same RK4
/// scheme and renormalized every `renorm_every` steps; the estimate is the
/// mean log growth over n*dt. Throws Overflow if the trajectory or tangent
/// leaves the finite range and Degenerate if the tangent collapses to zero.
double largest_lyapunov(const SystemState& s0, const SystemParams& p, std::size_t n,
                        std::size_t renorm_every);

}  // namespace engm
