#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace fuzzytune {

enum class DynamicsForm {
  /// Widely used cart-pole pendulum equation (Barto et al. form). Default.
  StandardCartPole,
  /// Alternative arrangement with an optional cart-velocity coupling term.
  /// Its gravity term is restoring at u = 0.
  PaperVerbatim,
};

struct PlantParams {
  double cart_mass = 1.0;      // M, kg
  double pole_mass = 0.1;      // m, kg
  double pole_length = 0.5;    // l, m
  double gravity = 9.8;        // g, m/s^2
  double cart_coupling = 0.0;  // b, multiplies cos(theta) * x_dot
  DynamicsForm form = DynamicsForm::StandardCartPole;

  friend bool operator==(const PlantParams&, const PlantParams&) = default;
};

/// Pendulum angle and rate; the cart states are carried passively.
struct PlantState {
  double theta = 0.0;      // rad, 0 = upright
  double theta_dot = 0.0;  // rad/s
  double x = 0.0;          // m
  double x_dot = 0.0;      // m/s

  friend bool operator==(const PlantState&, const PlantState&) = default;
};

class DegenerateDynamics : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMinDynamicsDenominator = 1e-12;

inline void validate(const PlantParams& p) {
  if (!(p.cart_mass > 0.0) || !(p.pole_mass > 0.0) || !(p.pole_length > 0.0) || !(p.gravity > 0.0)) {
    throw std::invalid_argument("plant masses, length and gravity must be > 0");
  }
}

/// Angular acceleration theta'' for force u (N).
inline double angular_accel(const PlantState& s, double u, const PlantParams& p) {
  const double sin_t = std::sin(s.theta);
  const double cos_t = std::cos(s.theta);
  const double total_mass = p.cart_mass + p.pole_mass;
  const double m = p.pole_mass;
  const double l = p.pole_length;
  const double w2 = s.theta_dot * s.theta_dot;

  double numerator = 0.0;
  double denominator = 0.0;
  switch (p.form) {
    case DynamicsForm::StandardCartPole:
      numerator = p.gravity * sin_t + cos_t * (-u - m * l * w2 * sin_t) / total_mass;
      denominator = l * (4.0 / 3.0 - m * cos_t * cos_t / total_mass);
      break;
    case DynamicsForm::PaperVerbatim:
      numerator = -u * cos_t + p.cart_coupling * cos_t * s.x_dot - m * l * w2 * sin_t - total_mass * p.gravity * sin_t;
      denominator = l * (4.0 / (3.0 * total_mass) - m * cos_t * cos_t);
      break;
  }
  if (std::abs(denominator) < kMinDynamicsDenominator) {
    throw DegenerateDynamics("pendulum dynamics denominator vanished at theta = " + std::to_string(s.theta));
  }
  return numerator / denominator;
}

/// One classical RK4 step of (theta, theta_dot) with u held over the step.
/// The cart drifts at constant x_dot.
inline PlantState step_rk4(const PlantState& s, double u, double dt, const PlantParams& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be > 0");

  auto accel_at = [&](double theta, double theta_dot) {
    PlantState probe = s;
    probe.theta = theta;
    probe.theta_dot = theta_dot;
    return angular_accel(probe, u, p);
  };

  const double k1_th = s.theta_dot;
  const double k1_w = accel_at(s.theta, s.theta_dot);
  const double k2_th = s.theta_dot + 0.5 * dt * k1_w;
  const double k2_w = accel_at(s.theta + 0.5 * dt * k1_th, k2_th);
  const double k3_th = s.theta_dot + 0.5 * dt * k2_w;
  const double k3_w = accel_at(s.theta + 0.5 * dt * k2_th, k3_th);
  const double k4_th = s.theta_dot + dt * k3_w;
  const double k4_w = accel_at(s.theta + dt * k3_th, k4_th);

  PlantState next = s;
  next.theta = s.theta + dt / 6.0 * (k1_th + 2.0 * k2_th + 2.0 * k3_th + k4_th);
  next.theta_dot = s.theta_dot + dt / 6.0 * (k1_w + 2.0 * k2_w + 2.0 * k3_w + k4_w);
  next.x = s.x + dt * s.x_dot;

  if (!std::isfinite(next.theta) || !std::isfinite(next.theta_dot) || !std::isfinite(next.x) ||
      !std::isfinite(next.x_dot)) {
    throw NonFinite("plant state left the finite range");
  }
  return next;
}

}  // namespace fuzzytune
