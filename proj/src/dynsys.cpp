#include "engm/dynsys.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "engm/error.hpp"
#include "rk4_kernel.hpp"

namespace engm {

bool SystemState::finite() const noexcept {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) && std::isfinite(w);
}

double SystemState::max_norm() const noexcept {
  return std::max(std::max(std::fabs(x), std::fabs(y)), std::max(std::fabs(z), std::fabs(w)));
}

SystemState swap_pairs(const SystemState& s) noexcept { return {s.z, s.w, s.x, s.y}; }
SystemState negate_xy(const SystemState& s) noexcept { return {-s.x, -s.y, s.z, s.w}; }
SystemState negate_zw(const SystemState& s) noexcept { return {s.x, s.y, -s.z, -s.w}; }

namespace {

void check_step(double dt) {
  if (!(dt > 0.0 && dt <= 0.1)) {
    throw Error(ErrorCode::InvalidArgument, "dt must lie in (0, 0.1], got " + std::to_string(dt));
  }
}

}  // namespace

SystemParams SystemParams::unconstrained(double a, double b, double mu, double dt) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(mu)) {
    throw Error(ErrorCode::InvalidArgument, "system parameters must be finite");
  }
  check_step(dt);
  return SystemParams(a, b, mu, dt);
}

SystemParams SystemParams::chaotic(double a, double b, double mu, double dt) {
  SystemParams p = unconstrained(a, b, mu, dt);
  if (!p.satisfies_sign_constraints()) {
    throw Error(ErrorCode::InvalidArgument,
                "parameters must satisfy a < 0, b > 0, mu > 0 (got a=" + std::to_string(a) +
                    ", b=" + std::to_string(b) + ", mu=" + std::to_string(mu) + ")");
  }
  return p;
}

SystemParams SystemParams::defaults() { return chaotic(-1.0, 0.5, 4.0, 0.02); }

bool SystemParams::satisfies_sign_constraints() const noexcept {
  return a_ < 0.0 && b_ > 0.0 && mu_ > 0.0;
}

SystemState deriv(const SystemState& s, const SystemParams& p) noexcept {
  return detail::flow(s, p.a(), p.b(), p.mu());
}

SystemState rk4_step(const SystemState& s, const SystemParams& p) {
  const SystemState next = detail::rk4(s, p.a(), p.b(), p.mu(), p.dt());
  if (!next.finite()) throw Error(ErrorCode::Overflow, "RK4 step produced a non-finite state");
  return next;
}

Trajectory::Trajectory(std::vector<SystemState> states, double dt)
    : states_(std::move(states)), dt_(dt) {}

Trajectory integrate(const SystemState& s0, const SystemParams& p, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "integrate needs at least one step");
  std::vector<SystemState> states;
  states.reserve(n + 1);
  states.push_back(s0);
  SystemState s = s0;
  for (std::size_t i = 1; i <= n; ++i) {
    s = detail::rk4(s, p.a(), p.b(), p.mu(), p.dt());
    if (!s.finite()) {
      throw Error(ErrorCode::Overflow, "state became non-finite at step " + std::to_string(i));
    }
    states.push_back(s);
  }
  return Trajectory(std::move(states), p.dt());
}

namespace {

// Trajectory point together with a tangent vector.
struct Tangent {
  SystemState s;
  SystemState v;
};

Tangent tangent_flow(const Tangent& t, double a, double b, double mu) noexcept {
  const double x = t.s.x;
  const double z = t.s.z;
  const double x2 = x * x;
  const double z2 = z * z;
  const double cross = 2.0 * (a + b) * x * z;
  const double jyx = mu + 3.0 * a * x2 + (a + b) * z2;
  const double jwz = mu + 3.0 * a * z2 + (a + b) * x2;
  const SystemState dv{t.v.y, jyx * t.v.x + cross * t.v.z, t.v.w, cross * t.v.x + jwz * t.v.z};
  return {detail::flow(t.s, a, b, mu), dv};
}

Tangent tangent_axpy(const Tangent& t, double h, const Tangent& k) noexcept {
  return {detail::axpy(t.s, h, k.s), detail::axpy(t.v, h, k.v)};
}

SystemState combine(const SystemState& s, double sixth, const SystemState& k1,
                    const SystemState& k2, const SystemState& k3, const SystemState& k4) {
  return {detail::rk4_combine(s.x, sixth, k1.x, k2.x, k3.x, k4.x),
          detail::rk4_combine(s.y, sixth, k1.y, k2.y, k3.y, k4.y),
          detail::rk4_combine(s.z, sixth, k1.z, k2.z, k3.z, k4.z),
          detail::rk4_combine(s.w, sixth, k1.w, k2.w, k3.w, k4.w)};
}

Tangent tangent_rk4(const Tangent& t, const SystemParams& p) noexcept {
  const double a = p.a(), b = p.b(), mu = p.mu(), dt = p.dt();
  const Tangent k1 = tangent_flow(t, a, b, mu);
  const Tangent k2 = tangent_flow(tangent_axpy(t, dt / 2.0, k1), a, b, mu);
  const Tangent k3 = tangent_flow(tangent_axpy(t, dt / 2.0, k2), a, b, mu);
  const Tangent k4 = tangent_flow(tangent_axpy(t, dt, k3), a, b, mu);
  return {combine(t.s, dt / 6.0, k1.s, k2.s, k3.s, k4.s),
          combine(t.v, dt / 6.0, k1.v, k2.v, k3.v, k4.v)};
}

double euclidean(const SystemState& v) noexcept {
  return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z + v.w * v.w);
}

}  // namespace

double largest_lyapunov(const SystemState& s0, const SystemParams& p, std::size_t n,
                        std::size_t renorm_every) {
  if (n == 0 || renorm_every == 0) {
    throw Error(ErrorCode::InvalidArgument, "largest_lyapunov needs n >= 1 and renorm_every >= 1");
  }
  if (s0 == SystemState{}) {
    throw Error(ErrorCode::InvalidArgument, "initial state is the origin fixed point");
  }
  Tangent t{s0, {0.5, 0.5, 0.5, 0.5}};
  double log_growth = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    t = tangent_rk4(t, p);
    if (i % renorm_every == 0 || i == n) {
      if (!t.s.finite() || !t.v.finite()) {
        throw Error(ErrorCode::Overflow, "trajectory escaped at step " + std::to_string(i));
      }
      const double norm = euclidean(t.v);
      if (!(norm > 0.0) || !std::isnormal(norm)) {
        throw Error(ErrorCode::Degenerate, "tangent vector collapsed at step " + std::to_string(i));
      }
      log_growth += std::log(norm);
      t.v = {t.v.x / norm, t.v.y / norm, t.v.z / norm, t.v.w / norm};
    }
  }
  return log_growth / (static_cast<double>(n) * p.dt());
}

}  // namespace engm
