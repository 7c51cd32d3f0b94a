#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fuzzytune/fuzzy_controller.hpp"
#include "fuzzytune/pendulum_plant.hpp"

namespace fuzzytune {

/// Error substituted for every sample lost to an aborted run.
inline constexpr double kAbortPenaltyError = std::numbers::pi;

struct SimConfig {
  double sample_period = 0.01;  // T, s
  double horizon = 5.0;         // s
  double theta0 = 0.22;         // rad
  double theta_dot0 = 0.0;      // rad/s
  double reference = 0.0;       // rad
  double abort_angle = std::numbers::pi / 2.0;

  /// Number of samples n = round(horizon / T).
  std::size_t samples() const { return static_cast<std::size_t>(std::llround(horizon / sample_period)); }

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

inline void validate(const SimConfig& s) {
  if (!(s.sample_period > 0.0)) throw std::invalid_argument("sample period must be > 0");
  if (!(s.horizon >= s.sample_period)) throw std::invalid_argument("horizon must be >= sample period");
  if (s.samples() < 1) throw std::invalid_argument("horizon must hold at least one sample");
  if (!(s.abort_angle > 0.0)) throw std::invalid_argument("abort angle must be > 0");
}

struct TraceSample {
  double t = 0.0;
  double theta = 0.0;
  double theta_dot = 0.0;
  double u = 0.0;
  double e = 0.0;
};

struct Trace {
  std::vector<TraceSample> samples;
  bool aborted = false;
  std::optional<std::size_t> abort_step;
};

/// Sampled closed loop: at t_k = kT the controller sees e(k) = r - theta(k)
/// and the backward difference de(k) (zero at k = 0); u(k) is held over one
/// RK4 step. Stops early, flagging the trace, once |theta| exceeds the abort
/// angle or the plant state degenerates.
inline Trace simulate(const ControllerParams& params, const PlantParams& plant, const SimConfig& sim) {
  const std::size_t n = sim.samples();
  const double T = sim.sample_period;

  Trace trace;
  trace.samples.reserve(n);

  PlantState state;
  state.theta = sim.theta0;
  state.theta_dot = sim.theta_dot0;
  double e_prev = sim.reference - state.theta;

  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(state.theta) || !std::isfinite(state.theta_dot) || std::abs(state.theta) > sim.abort_angle) {
      trace.aborted = true;
      trace.abort_step = k;
      break;
    }
    const double e = sim.reference - state.theta;
    const double de = (e - e_prev) / T;
    e_prev = e;
    const double u = control(e, de, params);
    if (!std::isfinite(u)) {
      trace.aborted = true;
      trace.abort_step = k;
      break;
    }
    trace.samples.push_back({static_cast<double>(k) * T, state.theta, state.theta_dot, u, e});

    if (k + 1 == n) break;
    try {
      state = step_rk4(state, u, T, plant);
    } catch (const DegenerateDynamics&) {
      trace.aborted = true;
      trace.abort_step = k + 1;
      break;
    } catch (const NonFinite&) {
      trace.aborted = true;
      trace.abort_step = k + 1;
      break;
    }
  }
  return trace;
}

/// MSE = (1 / (n T)) * sum of e(k)^2 over n samples; samples missing after an
/// abort count as kAbortPenaltyError each.
inline double mse(const Trace& trace, std::size_t n, double sample_period) {
  if (n < 1) throw std::invalid_argument("mse: n must be >= 1");
  if (!(sample_period > 0.0)) throw std::invalid_argument("mse: sample period must be > 0");
  double sum = 0.0;
  const std::size_t recorded = std::min(n, trace.samples.size());
  for (std::size_t k = 0; k < recorded; ++k) sum += trace.samples[k].e * trace.samples[k].e;
  sum += static_cast<double>(n - recorded) * kAbortPenaltyError * kAbortPenaltyError;
  return sum / (static_cast<double>(n) * sample_period);
}

/// Earliest sample time after which |theta| stays within band for the rest of
/// the trace. None for aborted traces or when the last sample is outside.
inline std::optional<double> settling_time(const Trace& trace, double band) {
  if (!(band > 0.0)) throw std::invalid_argument("settling_time: band must be > 0");
  if (trace.aborted || trace.samples.empty()) return std::nullopt;
  std::optional<double> settled;
  for (auto it = trace.samples.rbegin(); it != trace.samples.rend(); ++it) {
    if (std::abs(it->theta) > band) break;
    settled = it->t;
  }
  return settled;
}

/// Band used to report settling: 5% of the initial deflection, at least 0.01 rad.
inline double settling_band(double theta0) { return std::max(0.05 * std::abs(theta0), 0.01); }

/// Fitness of a raw particle position: repair, decode, simulate, score.
inline double evaluate(const ParamVector& position, const PlantParams& plant, const SimConfig& sim,
                       const ScalingGains& gains) {
  const ControllerParams params = decode(repair(position), gains);
  return mse(simulate(params, plant, sim), sim.samples(), sim.sample_period);
}

/// Binds the plant, simulation and gains into a position -> fitness callable.
struct FitnessFunction {
  PlantParams plant;
  SimConfig sim;
  ScalingGains gains;

  double operator()(const ParamVector& position) const { return evaluate(position, plant, sim, gains); }
};

}  // namespace fuzzytune
