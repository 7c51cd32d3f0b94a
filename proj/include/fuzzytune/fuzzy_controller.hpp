#pragma once

// Zero-order Takagi-Sugeno controller with two inputs (error and error
// derivative), three triangular terms per input (N, Z, P), a diagonal
// three-rule base and singleton consequents.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>

namespace fuzzytune {

inline constexpr std::size_t kNumParams = 9;
using ParamVector = std::array<double, kNumParams>;

/// Minimum spacing between adjacent modal values of a triple.
inline constexpr double kMinGap = 1e-3;
/// Below this total activation the controller output is zero.
inline constexpr double kMinActivation = 1e-9;
/// Round-off slack allowed when checking kMinGap.
inline constexpr double kGapSlack = 1e-12;

struct MembershipTriple {
  double a1 = -0.5;
  double a2 = 0.0;
  double a3 = 0.5;

  friend bool operator==(const MembershipTriple&, const MembershipTriple&) = default;
};

struct MembershipGrades {
  double mu_n = 0.0;
  double mu_z = 0.0;
  double mu_p = 0.0;
};

/// Firing strengths of the rules N∧N→N, Z∧Z→Z, P∧P→P.
struct Activations {
  double n = 0.0;
  double z = 0.0;
  double p = 0.0;
};

/// Input and output normalization gains. Not optimized.
struct ScalingGains {
  double ge = 1.25;
  double gde = 0.25;
  double gu = -30.0;

  friend bool operator==(const ScalingGains&, const ScalingGains&) = default;
};

struct ControllerParams {
  MembershipTriple e_mf;
  MembershipTriple de_mf;
  MembershipTriple singletons{-1.0, 0.0, 1.0};
  ScalingGains gains;

  friend bool operator==(const ControllerParams&, const ControllerParams&) = default;
};

namespace detail {

inline std::optional<std::string> check_triple(const MembershipTriple& t, const char* names) {
  const std::string n = names;
  for (double v : {t.a1, t.a2, t.a3}) {
    if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
      return n + ": values must lie in [-1, 1]";
    }
  }
  if (!(t.a1 < t.a2)) return n + ": first value must be < second";
  if (!(t.a2 < t.a3)) return n + ": second value must be < third";
  if (t.a2 - t.a1 < kMinGap - kGapSlack || t.a3 - t.a2 < kMinGap - kGapSlack) {
    return n + ": adjacent values closer than the minimum gap 1e-3";
  }
  return std::nullopt;
}

}  // namespace detail

/// Returns a description of the first violated invariant, or nullopt.
inline std::optional<std::string> validate(const ControllerParams& p) {
  if (auto err = detail::check_triple(p.e_mf, "a1,a2,a3")) return err;
  if (auto err = detail::check_triple(p.de_mf, "b1,b2,b3")) return err;
  if (auto err = detail::check_triple(p.singletons, "c1,c2,c3")) return err;
  if (!(p.gains.ge > 0.0) || !std::isfinite(p.gains.ge)) return std::string("Ge must be > 0");
  if (!(p.gains.gde > 0.0) || !std::isfinite(p.gains.gde)) return std::string("Gde must be > 0");
  if (!std::isfinite(p.gains.gu)) return std::string("Gu must be finite");
  return std::nullopt;
}

/// Triangular fuzzification with saturated outer terms.
inline MembershipGrades fuzzify(double x, const MembershipTriple& t) noexcept {
  MembershipGrades g;
  if (x < t.a1) {
    g.mu_n = 1.0;
  } else if (x < t.a2) {
    g.mu_n = (t.a2 - x) / (t.a2 - t.a1);
    g.mu_z = (x - t.a1) / (t.a2 - t.a1);
  } else if (x < t.a3) {
    g.mu_z = (t.a3 - x) / (t.a3 - t.a2);
    g.mu_p = (x - t.a2) / (t.a3 - t.a2);
  } else {
    g.mu_p = 1.0;
  }
  return g;
}

/// Min conjunction over the diagonal rule base; off-diagonal cells have no rule.
inline Activations infer(const MembershipGrades& e, const MembershipGrades& de) noexcept {
  return {std::min(e.mu_n, de.mu_n), std::min(e.mu_z, de.mu_z), std::min(e.mu_p, de.mu_p)};
}

/// Center of gravity over singleton consequents.
inline double defuzzify(const Activations& a, const MembershipTriple& c) noexcept {
  const double total = a.n + a.z + a.p;
  if (total < kMinActivation) return 0.0;
  return (a.n * c.a1 + a.z * c.a2 + a.p * c.a3) / total;
}

/// Full controller: physical error and error rate in, actuator command out.
inline double control(double e, double de, const ControllerParams& p) noexcept {
  const double e_n = std::clamp(p.gains.ge * e, -1.0, 1.0);
  const double de_n = std::clamp(p.gains.gde * de, -1.0, 1.0);
  const Activations a = infer(fuzzify(e_n, p.e_mf), fuzzify(de_n, p.de_mf));
  return p.gains.gu * defuzzify(a, p.singletons);
}

namespace detail {

inline bool triple_ok(const double* t) noexcept {
  return t[0] <= t[1] && t[1] <= t[2] && t[1] - t[0] >= kMinGap - kGapSlack &&
         t[2] - t[1] >= kMinGap - kGapSlack && t[0] >= -1.0 && t[2] <= 1.0;
}

// Sort, then enforce t[i+1] - t[i] >= kMinGap with the least-squares
// adjustment: in the shifted coordinates z_i = t_i - i*gap the constraint is
// monotonicity (solved by pooling adjacent violators) and the [-1, 1] box
// becomes z_i in [-1, 1 - 2*gap]. A pooled pair or triple ends up spread
// symmetrically about its mean.
inline void repair_triple(double* t) {
  for (int i = 0; i < 3; ++i) t[i] = std::clamp(t[i], -1.0, 1.0);
  std::sort(t, t + 3);
  if (triple_ok(t)) return;

  double block_mean[3];
  int block_len[3];
  int blocks = 0;
  for (int i = 0; i < 3; ++i) {
    block_mean[blocks] = t[i] - i * kMinGap;
    block_len[blocks] = 1;
    ++blocks;
    while (blocks > 1 && block_mean[blocks - 2] > block_mean[blocks - 1]) {
      const int len = block_len[blocks - 2] + block_len[blocks - 1];
      block_mean[blocks - 2] =
          (block_mean[blocks - 2] * block_len[blocks - 2] + block_mean[blocks - 1] * block_len[blocks - 1]) / len;
      block_len[blocks - 2] = len;
      --blocks;
    }
  }
  int k = 0;
  for (int b = 0; b < blocks; ++b) {
    const double z = std::clamp(block_mean[b], -1.0, 1.0 - 2.0 * kMinGap);
    for (int j = 0; j < block_len[b]; ++j, ++k) t[k] = std::clamp(z + k * kMinGap, -1.0, 1.0);
  }
}

}  // namespace detail

/// Makes each triple of a raw 9-vector strictly ordered with at least kMinGap
/// spacing. Vectors already satisfying that are returned unchanged.
inline ParamVector repair(ParamVector v) {
  for (std::size_t i = 0; i < kNumParams; i += 3) detail::repair_triple(v.data() + i);
  return v;
}

/// Positions 1-3 → error terms, 4-6 → error-rate terms, 7-9 → singletons.
inline ControllerParams decode(const ParamVector& v, const ScalingGains& gains) {
  ControllerParams p;
  p.e_mf = {v[0], v[1], v[2]};
  p.de_mf = {v[3], v[4], v[5]};
  p.singletons = {v[6], v[7], v[8]};
  p.gains = gains;
  return p;
}

inline ParamVector encode(const ControllerParams& p) {
  return {p.e_mf.a1,  p.e_mf.a2,  p.e_mf.a3,  p.de_mf.a1,      p.de_mf.a2,
          p.de_mf.a3, p.singletons.a1, p.singletons.a2, p.singletons.a3};
}

}  // namespace fuzzytune
