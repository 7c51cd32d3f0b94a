#pragma once

// PSO generations with tabu-search refinement after each one.

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "fuzzytune/closed_loop.hpp"
#include "fuzzytune/fuzzy_controller.hpp"
#include "fuzzytune/pso.hpp"
#include "fuzzytune/random.hpp"
#include "fuzzytune/tabu.hpp"

namespace fuzzytune {

enum class TsScope { GbestOnly, AllParticles };

struct HybridConfig {
  std::size_t generations = 2;
  TsScope ts_scope = TsScope::GbestOnly;
  pso::PsoConfig pso;
  tabu::TabuConfig tabu;

  friend bool operator==(const HybridConfig&, const HybridConfig&) = default;
};

inline void validate(const HybridConfig& c) {
  if (c.generations < 1) throw std::invalid_argument("generations must be >= 1");
  pso::validate(c.pso);
  tabu::validate(c.tabu);
}

enum class Phase { Pso, Ts };

inline std::string_view phase_name(Phase p) { return p == Phase::Pso ? "pso" : "ts"; }

struct HistoryRecord {
  Phase phase = Phase::Pso;
  std::size_t generation = 0;  // 1-based
  std::size_t iteration = 0;   // 0 for swarm batches, 1-based TS iteration otherwise
  std::size_t evaluations = 0;
  double best_fitness = 0.0;
  ParamVector best_position{};
};

using OptimizationHistory = std::vector<HistoryRecord>;

template <std::size_t N>
struct HybridResult {
  std::array<double, N> best_position{};
  double best_fitness = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  std::vector<HistoryRecord> history;
};

/// Exact number of objective evaluations a run with this config performs.
inline std::size_t total_evaluations(const HybridConfig& c) {
  const std::size_t ts_starts = c.ts_scope == TsScope::GbestOnly ? 1 : c.pso.swarm_size;
  return c.pso.swarm_size * c.generations + c.generations * c.tabu.iterations * c.tabu.neighborhood_size * ts_starts;
}

/// Generic driver. `repair` maps raw positions into the feasible set at
/// initialization; the objective receives raw positions.
template <std::size_t N, class Objective, class Repair = pso::NoRepair>
HybridResult<N> hybrid_search(const HybridConfig& config, Objective&& objective, Repair repair = {}) {
  validate(config);
  const pso::PsoConfig& pc = config.pso;

  std::vector<Rng> streams = pso::make_particle_streams(pc);
  std::vector<pso::Particle<N>> swarm = pso::init_swarm<N>(pc, streams, repair);
  pso::GlobalBest<N> gbest;

  HybridResult<N> out;
  std::vector<double> fitness(swarm.size());

  auto record = [&](Phase phase, std::size_t gen, std::size_t iter, double best, const std::array<double, N>& pos) {
    HistoryRecord r;
    r.phase = phase;
    r.generation = gen;
    r.iteration = iter;
    r.evaluations = out.evaluations;
    r.best_fitness = best;
    if constexpr (N == kNumParams) r.best_position = pos;
    out.history.push_back(r);
  };

  for (std::size_t gen = 1; gen <= config.generations; ++gen) {
    for (std::size_t i = 0; i < swarm.size(); ++i) fitness[i] = objective(swarm[i].position);
    out.evaluations += swarm.size();
    pso::update_bests<N>(swarm, fitness, gbest);
    record(Phase::Pso, gen, 0, gbest.fitness, gbest.position);

    pso::move_swarm<N>(swarm, gbest, pc, streams);

    if (config.tabu.iterations == 0) continue;

    if (config.ts_scope == TsScope::GbestOnly) {
      Rng rng(pc.seed, config.tabu.stream + gen);
      const double incumbent = gbest.fitness;
      const std::size_t evals_before = out.evaluations;
      auto observer = [&](const tabu::IterationInfo<N>& info) {
        out.evaluations = evals_before + info.evaluations;
        if (info.best_fitness < incumbent) {
          record(Phase::Ts, gen, info.iteration, info.best_fitness, *info.best_position);
        } else {
          record(Phase::Ts, gen, info.iteration, incumbent, gbest.position);
        }
      };
      const auto ts = tabu::tabu_search<N>(gbest.position, gbest.fitness, objective, config.tabu, rng, observer);
      out.evaluations = evals_before + ts.evaluations;
      if (ts.best_fitness < gbest.fitness) {
        gbest.fitness = ts.best_fitness;
        gbest.position = ts.best_position;
      }
    } else {
      for (std::size_t i = 0; i < swarm.size(); ++i) {
        Rng rng(pc.seed, config.tabu.stream + gen * pc.swarm_size + i);
        pso::Particle<N>& p = swarm[i];
        const std::size_t evals_before = out.evaluations;
        auto observer = [&](const tabu::IterationInfo<N>& info) {
          out.evaluations = evals_before + info.evaluations;
          if (info.best_fitness < gbest.fitness) {
            record(Phase::Ts, gen, info.iteration, info.best_fitness, *info.best_position);
          } else {
            record(Phase::Ts, gen, info.iteration, gbest.fitness, gbest.position);
          }
        };
        const auto ts = tabu::tabu_search<N>(p.pbest_position, p.pbest_fitness, objective, config.tabu, rng, observer);
        out.evaluations = evals_before + ts.evaluations;
        if (ts.best_fitness < p.pbest_fitness) {
          p.position = ts.best_position;
          p.pbest_position = ts.best_position;
          p.pbest_fitness = ts.best_fitness;
          if (p.pbest_fitness < gbest.fitness) {
            gbest.fitness = p.pbest_fitness;
            gbest.position = p.pbest_position;
          }
        }
      }
    }
  }

  out.best_position = gbest.position;
  out.best_fitness = gbest.fitness;
  return out;
}

struct OptimizeResult {
  ControllerParams best;
  double best_fitness = 0.0;
  std::size_t evaluations = 0;
  OptimizationHistory history;
};

/// Tunes the nine controller parameters against the closed-loop MSE.
inline OptimizeResult optimize(const HybridConfig& config, const PlantParams& plant, const SimConfig& sim,
                               const ScalingGains& gains) {
  validate(plant);
  validate(sim);
  const FitnessFunction fitness{plant, sim, gains};
  auto result = hybrid_search<kNumParams>(config, fitness, [](const ParamVector& v) { return repair(v); });
  return {decode(repair(result.best_position), gains), result.best_fitness, result.evaluations,
          std::move(result.history)};
}

}  // namespace fuzzytune
