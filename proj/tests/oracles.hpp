#pragma once

// Reference computations used only by tests. They are written out separately
// from the library (long double, plain loops) so a bug in the library cannot
// also hide in its own oracle.

#include <cmath>
#include <cstddef>

namespace oracle {

struct Pendulum {
  long double M = 1.0L;
  long double m = 0.1L;
  long double l = 0.5L;
  long double g = 9.8L;
  long double b = 0.0L;
};

/// The verbatim-form pendulum equation, term by term.
inline long double verbatim_accel(long double th, long double thd, long double xd, long double u, const Pendulum& p) {
  const long double c = std::cos(th);
  const long double s = std::sin(th);
  const long double top = -u * c + p.b * c * xd - p.m * p.l * thd * thd * s - (p.M + p.m) * p.g * s;
  const long double bottom = p.l * (4.0L / (3.0L * (p.M + p.m)) - p.m * c * c);
  return top / bottom;
}

/// Cart-pole pendulum acceleration with the cart force eliminated.
inline long double cartpole_accel(long double th, long double thd, long double u, const Pendulum& p) {
  const long double c = std::cos(th);
  const long double s = std::sin(th);
  const long double mt = p.M + p.m;
  const long double temp = (u + p.m * p.l * thd * thd * s) / mt;
  return (p.g * s - c * temp) / (p.l * (4.0L / 3.0L - p.m * c * c / mt));
}

struct State {
  long double th;
  long double thd;
};

/// Forward Euler with a fixed fine step on the cart-pole model, constant u.
inline State euler(State s, long double u, long double dt, long double t_end, const Pendulum& p) {
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  for (std::size_t k = 0; k < steps; ++k) {
    const long double a = cartpole_accel(s.th, s.thd, u, p);
    s.th += dt * s.thd;
    s.thd += dt * a;
  }
  return s;
}

/// Euler at dt and dt/2 combined by Richardson extrapolation, which cancels
/// the first-order error term and makes the reference far more accurate than
/// the RK4 steps it checks.
inline State euler_extrapolated(State s, long double u, long double dt, long double t_end, const Pendulum& p) {
  const State coarse = euler(s, u, dt, t_end, p);
  const State fine = euler(s, u, dt / 2.0L, t_end, p);
  return {2.0L * fine.th - coarse.th, 2.0L * fine.thd - coarse.thd};
}

/// Arithmetic form of the sampled MSE cost: sum(e^2) / (n T).
inline long double mse(const double* errors, std::size_t n, long double T) {
  long double sum = 0.0L;
  for (std::size_t k = 0; k < n; ++k) sum += static_cast<long double>(errors[k]) * errors[k];
  return sum / (static_cast<long double>(n) * T);
}

}  // namespace oracle
