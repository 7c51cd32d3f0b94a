#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "fuzzytune/fuzzy_controller.hpp"
#include "fuzzytune/pso.hpp"

using namespace fuzzytune;
using namespace fuzzytune::pso;

namespace {

template <std::size_t N>
Particle<N> make_particle(const Vec<N>& p, const Vec<N>& v, const Vec<N>& pbest) {
  Particle<N> out;
  out.position = p;
  out.velocity = v;
  out.pbest_position = pbest;
  out.pbest_fitness = 1.0;
  return out;
}

}  // namespace

TEST(ClampMagnitude, Cases) {
  EXPECT_EQ(clamp_magnitude(5.0, 2.0), 2.0);
  EXPECT_EQ(clamp_magnitude(-5.0, 2.0), -2.0);
  EXPECT_EQ(clamp_magnitude(1.5, 2.0), 1.5);
  EXPECT_EQ(clamp_magnitude(-1.5, 2.0), -1.5);
}

TEST(InitSwarm, SizeAndBounds) {
  PsoConfig c;
  auto streams = make_particle_streams(c);
  const auto swarm = init_swarm<9>(c, streams, [](const ParamVector& v) { return repair(v); });
  ASSERT_EQ(swarm.size(), 20u);
  for (const auto& p : swarm) {
    EXPECT_EQ(p.pbest_position, p.position);
    EXPECT_EQ(p.pbest_fitness, std::numeric_limits<double>::infinity());
    EXPECT_EQ(repair(p.position), p.position);
    for (std::size_t d = 0; d < 9; ++d) {
      EXPECT_GE(p.position[d], c.pmin);
      EXPECT_LE(p.position[d], c.pmax);
      EXPECT_LE(std::abs(p.velocity[d]), c.vmax);
    }
  }
}

TEST(InitSwarm, SameSeedSameSwarm) {
  PsoConfig c;
  c.seed = 77;
  auto s1 = make_particle_streams(c);
  auto s2 = make_particle_streams(c);
  const auto a = init_swarm<9>(c, s1);
  const auto b = init_swarm<9>(c, s2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].position, b[i].position);
    EXPECT_EQ(a[i].velocity, b[i].velocity);
  }
}

TEST(InitSwarm, DifferentSeedsDiffer) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    PsoConfig a, b;
    a.seed = seed;
    b.seed = seed + 1000;
    auto sa = make_particle_streams(a);
    auto sb = make_particle_streams(b);
    EXPECT_NE(init_swarm<9>(a, sa)[0].position, init_swarm<9>(b, sb)[0].position);
  }
}

TEST(UpdateVelocity, PureInertia) {
  PsoConfig c;
  c.inertia = 1.0;
  c.c1 = c.c2 = 0.0;
  c.vmax = 0.4;
  Rng rng(1);
  const auto p = make_particle<3>({0.1, 0.2, 0.3}, {0.1, -0.5, 0.3}, {0.9, 0.9, 0.9});
  const GlobalBest<3> g{{-0.9, -0.9, -0.9}, 0.0};
  EXPECT_EQ(update_velocity(p, g, c, rng), (Vec<3>{0.1, -0.4, 0.3}));
}

TEST(UpdateVelocity, NoAttractionAtBests) {
  PsoConfig c;
  Rng rng(2);
  const auto p = make_particle<3>({0.1, 0.2, 0.3}, {0.1, -0.2, 0.3}, {0.1, 0.2, 0.3});
  const GlobalBest<3> g{{0.1, 0.2, 0.3}, 0.0};
  const auto v = update_velocity(p, g, c, rng);
  for (std::size_t d = 0; d < 3; ++d) EXPECT_EQ(v[d], c.inertia * p.velocity[d]);
}

TEST(UpdateVelocity, ScalarHandCase) {
  PsoConfig c;
  c.inertia = 0.5;
  c.c1 = c.c2 = 1.0;
  c.vmax = 10.0;
  // V = 0.1, pbest - p = 0.2, gbest - p = 0.4, R1 = R2 = 1.
  EXPECT_EQ(velocity_component(0.1, 0.0, 0.2, 0.4, 1.0, 1.0, c), 0.65);
  c.vmax = 0.5;
  EXPECT_EQ(velocity_component(0.1, 0.0, 0.2, 0.4, 1.0, 1.0, c), 0.5);
}

TEST(UpdateVelocity, DrawsTwoUniformsPerComponent) {
  PsoConfig c;
  const auto p = make_particle<2>({0.0, 0.1}, {0.1, -0.1}, {0.2, 0.3});
  const GlobalBest<2> g{{0.4, -0.5}, 0.0};
  Rng rng(3), replay(3);
  const auto v = update_velocity(p, g, c, rng);
  for (std::size_t d = 0; d < 2; ++d) {
    const double r1 = replay.uniform01();
    const double r2 = replay.uniform01();
    EXPECT_EQ(v[d], velocity_component(p.velocity[d], p.position[d], p.pbest_position[d], g.position[d], r1, r2, c));
  }
}

TEST(UpdatePosition, Cases) {
  PsoConfig c;
  EXPECT_EQ(update_position(make_particle<1>({0.9}, {0.3}, {0.0}), c)[0], 1.0);
  EXPECT_EQ(update_position(make_particle<1>({0.0}, {0.0}, {0.0}), c)[0], 0.0);
  EXPECT_DOUBLE_EQ(update_position(make_particle<1>({-0.2}, {0.1}, {0.0}), c)[0], -0.1);
  EXPECT_EQ(update_position(make_particle<1>({-0.9}, {-0.3}, {0.0}), c)[0], -1.0);
}

TEST(UpdateBests, WorseFitnessesChangeNothing) {
  std::vector<Particle<2>> swarm(2);
  swarm[0].pbest_fitness = 1.0;
  swarm[1].pbest_fitness = 2.0;
  swarm[0].position = {0.5, 0.5};
  GlobalBest<2> g{{0.0, 0.0}, 1.0};
  const std::vector<double> f{3.0, 4.0};
  EXPECT_FALSE(update_bests<2>(swarm, f, g));
  EXPECT_EQ(swarm[0].pbest_fitness, 1.0);
  EXPECT_EQ(swarm[0].pbest_position, (Vec<2>{0.0, 0.0}));
  EXPECT_EQ(g.fitness, 1.0);
}

TEST(UpdateBests, ImprovementPropagatesToGbest) {
  std::vector<Particle<2>> swarm(2);
  swarm[1].position = {0.3, -0.3};
  GlobalBest<2> g{{0.0, 0.0}, 1.0};
  const std::vector<double> f{5.0, 0.5};
  EXPECT_TRUE(update_bests<2>(swarm, f, g));
  EXPECT_EQ(g.fitness, 0.5);
  EXPECT_EQ(g.position, (Vec<2>{0.3, -0.3}));
  EXPECT_EQ(swarm[0].pbest_fitness, 5.0);
}

TEST(UpdateBests, TiesKeepIncumbent) {
  std::vector<Particle<2>> swarm(2);
  swarm[0].pbest_fitness = 0.7;
  swarm[0].pbest_position = {0.1, 0.1};
  swarm[0].position = {0.9, 0.9};
  swarm[1].position = {0.4, 0.4};
  GlobalBest<2> g{{0.1, 0.1}, 0.7};
  const std::vector<double> f{0.7, 0.7};
  EXPECT_FALSE(update_bests<2>(swarm, f, g));
  EXPECT_EQ(swarm[0].pbest_position, (Vec<2>{0.1, 0.1}));
  EXPECT_EQ(g.position, (Vec<2>{0.1, 0.1}));
}

TEST(PsoProperties, BoundsHoldOverRandomUpdates) {
  PsoConfig c;
  c.vmax = 0.3;
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    Particle<9> p;
    for (std::size_t d = 0; d < 9; ++d) {
      p.position[d] = rng.uniform(-1, 1);
      p.velocity[d] = rng.uniform(-c.vmax, c.vmax);
      p.pbest_position[d] = rng.uniform(-1, 1);
    }
    GlobalBest<9> g;
    for (double& x : g.position) x = rng.uniform(-1, 1);
    p.velocity = update_velocity(p, g, c, rng);
    p.position = update_position(p, c);
    for (std::size_t d = 0; d < 9; ++d) {
      ASSERT_LE(std::abs(p.velocity[d]), c.vmax);
      ASSERT_GE(p.position[d], c.pmin);
      ASSERT_LE(p.position[d], c.pmax);
    }
  }
}

TEST(PsoProperties, GbestMonotoneAndEqualsMinPbest) {
  PsoConfig c;
  c.seed = 5;
  auto streams = make_particle_streams(c);
  auto swarm = init_swarm<4>(c, streams);
  GlobalBest<4> g;
  auto sphere = [](const Vec<4>& x) {
    double s = 0.0;
    for (double v : x) s += (v - 0.3) * (v - 0.3);
    return s;
  };
  double last = std::numeric_limits<double>::infinity();
  for (int gen = 0; gen < 40; ++gen) {
    std::vector<double> f;
    for (const auto& p : swarm) f.push_back(sphere(p.position));
    update_bests<4>(swarm, f, g);
    double min_pbest = std::numeric_limits<double>::infinity();
    for (const auto& p : swarm) min_pbest = std::min(min_pbest, p.pbest_fitness);
    ASSERT_EQ(g.fitness, min_pbest);
    ASSERT_LE(g.fitness, last);
    last = g.fitness;
    move_swarm<4>(swarm, g, c, streams);
  }
  EXPECT_LT(last, 1e-3);
}

TEST(PsoProperties, ParticleStreamsAreIndependent) {
  // Particle 3's draws do not depend on how many draws particle 0 consumed.
  PsoConfig c;
  auto a = make_particle_streams(c);
  auto b = make_particle_streams(c);
  for (int i = 0; i < 100; ++i) (void)b[0].uniform01();
  EXPECT_EQ(a[3].uniform01(), b[3].uniform01());
}

TEST(PsoConfigValidation, RejectsBadValues) {
  PsoConfig c;
  c.swarm_size = 1;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = {};
  c.vmax = 0.0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = {};
  c.pmin = 1.0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = {};
  c.inertia = 1.5;
  EXPECT_THROW(validate(c), std::invalid_argument);
  EXPECT_NO_THROW(validate(PsoConfig{}));
}
