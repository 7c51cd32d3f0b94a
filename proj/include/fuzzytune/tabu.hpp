#pragma once

// Tabu search over a continuous box. Solutions are remembered by a quantized
// key; a tabu candidate is still admissible when it beats the best fitness
// found so far (aspiration).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

#include "fuzzytune/random.hpp"

namespace fuzzytune::tabu {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
using Key = std::array<std::int64_t, N>;

struct TabuConfig {
  std::size_t iterations = 5;
  std::size_t neighborhood_size = 10;
  double sigma = 0.05;
  std::size_t list_capacity = 7;
  double quantum = 0.01;
  double lower = -1.0;
  double upper = 1.0;
  /// Base id of the random streams used by the searches of one run.
  std::uint64_t stream = 1'000'000;

  friend bool operator==(const TabuConfig&, const TabuConfig&) = default;
};

inline void validate(const TabuConfig& c) {
  if (c.neighborhood_size < 1) throw std::invalid_argument("neighborhood_size must be >= 1");
  if (c.list_capacity < 1) throw std::invalid_argument("list_capacity must be >= 1");
  if (!(c.sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  if (!(c.quantum > 0.0)) throw std::invalid_argument("quantum must be > 0");
  if (!(c.lower < c.upper)) throw std::invalid_argument("tabu bounds must satisfy lower < upper");
}

/// Component-wise round(x / quantum).
template <std::size_t N>
Key<N> quantize_key(const Vec<N>& position, double quantum) {
  Key<N> key{};
  for (std::size_t d = 0; d < N; ++d) key[d] = std::llround(position[d] / quantum);
  return key;
}

/// Bounded FIFO of solution keys.
template <std::size_t N>
class TabuList {
 public:
  explicit TabuList(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ < 1) throw std::invalid_argument("TabuList capacity must be >= 1");
  }

  void push(const Key<N>& key) {
    if (entries_.size() == capacity_) entries_.pop_front();
    entries_.push_back(key);
  }

  bool contains(const Key<N>& key) const { return std::find(entries_.begin(), entries_.end(), key) != entries_.end(); }

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::deque<Key<N>>& entries() const { return entries_; }

 private:
  std::size_t capacity_;
  std::deque<Key<N>> entries_;
};

/// Gaussian perturbations of `center`, clamped into [lower, upper].
template <std::size_t N>
std::vector<Vec<N>> neighbors(const Vec<N>& center, const TabuConfig& config, Rng& rng) {
  std::vector<Vec<N>> out(config.neighborhood_size);
  for (Vec<N>& candidate : out) {
    for (std::size_t d = 0; d < N; ++d) {
      candidate[d] = std::clamp(center[d] + config.sigma * rng.normal(), config.lower, config.upper);
    }
  }
  return out;
}

template <std::size_t N>
struct SearchResult {
  Vec<N> best_position{};
  double best_fitness = 0.0;
  std::size_t evaluations = 0;
};

/// Passed to the observer after every iteration.
template <std::size_t N>
struct IterationInfo {
  std::size_t iteration = 0;  // 1-based
  std::size_t evaluations = 0;
  double best_fitness = 0.0;
  const Vec<N>* best_position = nullptr;
  const TabuList<N>* tabu_list = nullptr;
  const Vec<N>* current = nullptr;
};

struct NoObserver {
  template <class Info>
  void operator()(const Info&) const {}
};

/// Best-neighbor tabu search. Each iteration evaluates every candidate, moves
/// to the best admissible one even when it is worse than the current point,
/// and pushes the new point's key. If every candidate is tabu and none
/// aspirates, the best tabu candidate is taken. Returns the best point seen,
/// which includes the start.
template <std::size_t N, class Objective, class Observer = NoObserver>
SearchResult<N> tabu_search(const Vec<N>& start, double start_fitness, Objective&& evaluate, const TabuConfig& config,
                            Rng& rng, Observer&& observer = {}) {
  SearchResult<N> result{start, start_fitness, 0};
  if (config.iterations == 0) return result;

  TabuList<N> tabu(config.list_capacity);
  Vec<N> current = start;
  tabu.push(quantize_key(current, config.quantum));

  for (std::size_t it = 1; it <= config.iterations; ++it) {
    const std::vector<Vec<N>> candidates = neighbors(current, config, rng);
    std::vector<double> fitness(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) fitness[i] = evaluate(candidates[i]);
    result.evaluations += candidates.size();

    std::size_t chosen = candidates.size();
    std::size_t fallback = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (fitness[i] < fitness[fallback]) fallback = i;
      const bool admissible =
          !tabu.contains(quantize_key(candidates[i], config.quantum)) || fitness[i] < result.best_fitness;
      if (admissible && (chosen == candidates.size() || fitness[i] < fitness[chosen])) chosen = i;
    }
    if (chosen == candidates.size()) chosen = fallback;

    current = candidates[chosen];
    tabu.push(quantize_key(current, config.quantum));
    if (fitness[chosen] < result.best_fitness) {
      result.best_fitness = fitness[chosen];
      result.best_position = current;
    }
    observer(IterationInfo<N>{it, result.evaluations, result.best_fitness, &result.best_position, &tabu, &current});
  }
  return result;
}

}  // namespace fuzzytune::tabu
