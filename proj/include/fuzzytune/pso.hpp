#pragma once

// Global-best particle swarm with inertia weight, per-component velocity
// clamping and box-clamped positions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "fuzzytune/random.hpp"

namespace fuzzytune::pso {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct Particle {
  Vec<N> position{};
  Vec<N> velocity{};
  Vec<N> pbest_position{};
  double pbest_fitness = std::numeric_limits<double>::infinity();
};

template <std::size_t N>
struct GlobalBest {
  Vec<N> position{};
  double fitness = std::numeric_limits<double>::infinity();
};

struct PsoConfig {
  std::size_t swarm_size = 20;
  double inertia = 0.729;  // w
  double c1 = 1.49445;     // cognitive learning factor
  double c2 = 1.49445;     // social learning factor
  double vmax = 0.4;
  double pmin = -1.0;
  double pmax = 1.0;
  std::uint64_t seed = 1;

  friend bool operator==(const PsoConfig&, const PsoConfig&) = default;
};

inline void validate(const PsoConfig& c) {
  if (c.swarm_size < 2) throw std::invalid_argument("swarm_size must be >= 2");
  if (!(c.inertia >= 0.0 && c.inertia <= 1.0)) throw std::invalid_argument("inertia must lie in [0, 1]");
  if (!(c.c1 >= 0.0) || !(c.c2 >= 0.0)) throw std::invalid_argument("learning factors must be >= 0");
  if (!(c.vmax > 0.0)) throw std::invalid_argument("vmax must be > 0");
  if (!(c.pmin < c.pmax)) throw std::invalid_argument("pmin must be < pmax");
}

/// sign(v) * min(|v|, bound)
inline double clamp_magnitude(double v, double bound) noexcept {
  return std::copysign(std::min(std::abs(v), bound), v);
}

/// One random stream per particle, so particle i's draws never depend on how
/// many draws other particles consumed.
inline std::vector<Rng> make_particle_streams(const PsoConfig& config) {
  std::vector<Rng> streams;
  streams.reserve(config.swarm_size);
  for (std::size_t i = 0; i < config.swarm_size; ++i) streams.emplace_back(config.seed, i);
  return streams;
}

struct NoRepair {
  template <class V>
  V operator()(V v) const {
    return v;
  }
};

/// Uniform positions (passed through `repair`) and uniform velocities in
/// [-vmax, vmax]. pbest starts at the initial position with +inf fitness.
template <std::size_t N, class Repair = NoRepair>
std::vector<Particle<N>> init_swarm(const PsoConfig& config, std::span<Rng> streams, Repair repair = {}) {
  if (streams.size() != config.swarm_size) throw std::invalid_argument("init_swarm: one stream per particle");
  std::vector<Particle<N>> swarm(config.swarm_size);
  for (std::size_t i = 0; i < swarm.size(); ++i) {
    Rng& rng = streams[i];
    Particle<N>& p = swarm[i];
    for (std::size_t d = 0; d < N; ++d) p.position[d] = rng.uniform(config.pmin, config.pmax);
    p.position = repair(p.position);
    for (std::size_t d = 0; d < N; ++d) p.velocity[d] = rng.uniform(-config.vmax, config.vmax);
    p.pbest_position = p.position;
  }
  return swarm;
}

/// w V + c1 R1 (pbest - p) + c2 R2 (gbest - p), magnitude-clamped to vmax.
inline double velocity_component(double v, double p, double pbest, double gbest, double r1, double r2,
                                 const PsoConfig& config) noexcept {
  const double raw = config.inertia * v + config.c1 * r1 * (pbest - p) + config.c2 * r2 * (gbest - p);
  return clamp_magnitude(raw, config.vmax);
}

/// New velocity with fresh R1, R2 drawn per component.
template <std::size_t N>
Vec<N> update_velocity(const Particle<N>& particle, const GlobalBest<N>& gbest, const PsoConfig& config, Rng& rng) {
  Vec<N> v{};
  for (std::size_t d = 0; d < N; ++d) {
    const double r1 = rng.uniform01();
    const double r2 = rng.uniform01();
    v[d] = velocity_component(particle.velocity[d], particle.position[d], particle.pbest_position[d],
                              gbest.position[d], r1, r2, config);
  }
  return v;
}

/// p + V, clamped into [pmin, pmax]. Uses the particle's current velocity.
template <std::size_t N>
Vec<N> update_position(const Particle<N>& particle, const PsoConfig& config) {
  Vec<N> p{};
  for (std::size_t d = 0; d < N; ++d) {
    p[d] = std::clamp(particle.position[d] + particle.velocity[d], config.pmin, config.pmax);
  }
  return p;
}

/// Strict-improvement updates; ties keep the incumbent. Returns true when
/// gbest changed.
template <std::size_t N>
bool update_bests(std::span<Particle<N>> swarm, std::span<const double> fitnesses, GlobalBest<N>& gbest) {
  if (fitnesses.size() != swarm.size()) throw std::invalid_argument("update_bests: one fitness per particle");
  for (std::size_t i = 0; i < swarm.size(); ++i) {
    if (fitnesses[i] < swarm[i].pbest_fitness) {
      swarm[i].pbest_fitness = fitnesses[i];
      swarm[i].pbest_position = swarm[i].position;
    }
  }
  bool changed = false;
  for (const Particle<N>& p : swarm) {
    if (p.pbest_fitness < gbest.fitness) {
      gbest.fitness = p.pbest_fitness;
      gbest.position = p.pbest_position;
      changed = true;
    }
  }
  return changed;
}

/// Velocity then position update for every particle, each from its own stream.
template <std::size_t N>
void move_swarm(std::span<Particle<N>> swarm, const GlobalBest<N>& gbest, const PsoConfig& config,
                std::span<Rng> streams) {
  for (std::size_t i = 0; i < swarm.size(); ++i) {
    swarm[i].velocity = update_velocity(swarm[i], gbest, config, streams[i]);
    swarm[i].position = update_position(swarm[i], config);
  }
}

}  // namespace fuzzytune::pso
