#pragma once

// Text formats: controller parameter files, flat run configs, and the CSV
// outputs (trace, history, sweep summary). Everything is LF-terminated.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fuzzytune/closed_loop.hpp"
#include "fuzzytune/fuzzy_controller.hpp"
#include "fuzzytune/hybrid.hpp"
#include "fuzzytune/pendulum_plant.hpp"

namespace fuzzytune::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  /// 1-based; 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// `digits` significant digits, or the shortest string that reads back to
/// the same double when `digits` is 0.
inline std::string format_double(double v, int digits = 0) {
  char buf[64];
  if (digits == 0) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  }
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return v;
}

template <class Int>
std::optional<Int> parse_integer(std::string_view s) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct KeyValueLine {
  std::size_t line = 0;
  std::string key;
  std::string value;
};

/// Reads `key = value` lines; blank lines and lines starting with '#' are skipped.
inline std::vector<KeyValueLine> read_key_values(std::istream& in) {
  std::vector<KeyValueLine> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ParseError(line, "expected 'key = value'");
    const std::string_view key = trim(text.substr(0, eq));
    const std::string_view value = trim(text.substr(eq + 1));
    if (key.empty()) throw ParseError(line, "missing key");
    if (value.empty()) throw ParseError(line, "missing value for '" + std::string(key) + "'");
    for (const auto& prior : out) {
      if (prior.key == key) throw ParseError(line, "duplicate key '" + std::string(key) + "'");
    }
    out.push_back({line, std::string(key), std::string(value)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Controller parameter file

inline constexpr std::string_view kParamKeys[] = {"a1", "a2", "a3", "b1", "b2", "b3",
                                                  "c1", "c2", "c3", "Ge", "Gde", "Gu"};

inline void write_params(std::ostream& out, const ControllerParams& p) {
  const double values[] = {p.e_mf.a1,       p.e_mf.a2,       p.e_mf.a3,       p.de_mf.a1,
                           p.de_mf.a2,      p.de_mf.a3,      p.singletons.a1, p.singletons.a2,
                           p.singletons.a3, p.gains.ge,      p.gains.gde,     p.gains.gu};
  for (std::size_t i = 0; i < std::size(kParamKeys); ++i) {
    out << kParamKeys[i] << " = " << format_double(values[i]) << '\n';
  }
}

/// Parses and validates a parameter file; every key is required.
inline ControllerParams read_params(std::istream& in) {
  std::map<std::string, double, std::less<>> values;
  for (const KeyValueLine& kv : read_key_values(in)) {
    bool known = false;
    for (std::string_view k : kParamKeys) known = known || k == kv.key;
    if (!known) throw ParseError(kv.line, "unknown key '" + kv.key + "'");
    const auto v = parse_double(kv.value);
    if (!v) throw ParseError(kv.line, "invalid number '" + kv.value + "' for '" + kv.key + "'");
    values[kv.key] = *v;
  }
  for (std::string_view k : kParamKeys) {
    if (!values.contains(k)) throw ParseError(0, "missing key '" + std::string(k) + "'");
  }
  ControllerParams p;
  p.e_mf = {values["a1"], values["a2"], values["a3"]};
  p.de_mf = {values["b1"], values["b2"], values["b3"]};
  p.singletons = {values["c1"], values["c2"], values["c3"]};
  p.gains = {values["Ge"], values["Gde"], values["Gu"]};
  if (auto err = validate(p)) throw ParseError(0, "invalid controller parameters: " + *err);
  return p;
}

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
  HybridConfig hybrid;
  SimConfig sim;
  PlantParams plant;
  ScalingGains gains;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  /// Hybrid config with the run seed and position bounds propagated.
  HybridConfig effective_hybrid() const {
    HybridConfig h = hybrid;
    h.pso.seed = seed;
    h.tabu.lower = h.pso.pmin;
    h.tabu.upper = h.pso.pmax;
    return h;
  }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

struct ConfigField {
  std::string_view key;
  std::function<std::string(const RunConfig&)> get;
  std::function<bool(RunConfig&, const std::string&)> set;
};

template <class Access>
ConfigField real(std::string_view key, Access access) {
  return {key, [access](const RunConfig& c) { return format_double(access(c)); },
          [access](RunConfig& c, const std::string& s) {
            auto v = parse_double(s);
            if (!v) return false;
            access(c) = *v;
            return true;
          }};
}

template <class Int, class Access>
ConfigField integer(std::string_view key, Access access) {
  return {key, [access](const RunConfig& c) { return std::to_string(access(c)); },
          [access](RunConfig& c, const std::string& s) {
            auto v = parse_integer<Int>(s);
            if (!v) return false;
            access(c) = *v;
            return true;
          }};
}

inline const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = {
      integer<std::uint64_t>("seed", [](auto& c) -> auto& { return c.seed; }),
      {"output_dir", [](const RunConfig& c) { return c.output_dir; },
       [](RunConfig& c, const std::string& s) {
         c.output_dir = s;
         return true;
       }},
      integer<std::size_t>("generations", [](auto& c) -> auto& { return c.hybrid.generations; }),
      {"ts_scope",
       [](const RunConfig& c) { return std::string(c.hybrid.ts_scope == TsScope::GbestOnly ? "gbest" : "all"); },
       [](RunConfig& c, const std::string& s) {
         if (s == "gbest") c.hybrid.ts_scope = TsScope::GbestOnly;
         else if (s == "all") c.hybrid.ts_scope = TsScope::AllParticles;
         else return false;
         return true;
       }},
      integer<std::size_t>("swarm_size", [](auto& c) -> auto& { return c.hybrid.pso.swarm_size; }),
      real("inertia", [](auto& c) -> auto& { return c.hybrid.pso.inertia; }),
      real("c1", [](auto& c) -> auto& { return c.hybrid.pso.c1; }),
      real("c2", [](auto& c) -> auto& { return c.hybrid.pso.c2; }),
      real("vmax", [](auto& c) -> auto& { return c.hybrid.pso.vmax; }),
      real("pmin", [](auto& c) -> auto& { return c.hybrid.pso.pmin; }),
      real("pmax", [](auto& c) -> auto& { return c.hybrid.pso.pmax; }),
      integer<std::size_t>("ts_iterations", [](auto& c) -> auto& { return c.hybrid.tabu.iterations; }),
      integer<std::size_t>("neighborhood_size",
                           [](auto& c) -> auto& { return c.hybrid.tabu.neighborhood_size; }),
      real("sigma", [](auto& c) -> auto& { return c.hybrid.tabu.sigma; }),
      integer<std::size_t>("tabu_capacity", [](auto& c) -> auto& { return c.hybrid.tabu.list_capacity; }),
      real("quantum", [](auto& c) -> auto& { return c.hybrid.tabu.quantum; }),
      integer<std::uint64_t>("ts_stream", [](auto& c) -> auto& { return c.hybrid.tabu.stream; }),
      real("sample_period", [](auto& c) -> auto& { return c.sim.sample_period; }),
      real("horizon", [](auto& c) -> auto& { return c.sim.horizon; }),
      real("theta0", [](auto& c) -> auto& { return c.sim.theta0; }),
      real("theta_dot0", [](auto& c) -> auto& { return c.sim.theta_dot0; }),
      real("reference", [](auto& c) -> auto& { return c.sim.reference; }),
      real("abort_angle", [](auto& c) -> auto& { return c.sim.abort_angle; }),
      {"dynamics",
       [](const RunConfig& c) {
         return std::string(c.plant.form == DynamicsForm::StandardCartPole ? "standard" : "verbatim");
       },
       [](RunConfig& c, const std::string& s) {
         if (s == "standard") c.plant.form = DynamicsForm::StandardCartPole;
         else if (s == "verbatim") c.plant.form = DynamicsForm::PaperVerbatim;
         else return false;
         return true;
       }},
      real("cart_mass", [](auto& c) -> auto& { return c.plant.cart_mass; }),
      real("pole_mass", [](auto& c) -> auto& { return c.plant.pole_mass; }),
      real("pole_length", [](auto& c) -> auto& { return c.plant.pole_length; }),
      real("gravity", [](auto& c) -> auto& { return c.plant.gravity; }),
      real("cart_coupling", [](auto& c) -> auto& { return c.plant.cart_coupling; }),
      real("Ge", [](auto& c) -> auto& { return c.gains.ge; }),
      real("Gde", [](auto& c) -> auto& { return c.gains.gde; }),
      real("Gu", [](auto& c) -> auto& { return c.gains.gu; }),
  };
  return fields;
}

}  // namespace detail

/// Writes every key in canonical order.
inline void write_run_config(std::ostream& out, const RunConfig& c) {
  for (const auto& f : detail::config_fields()) out << f.key << " = " << f.get(c) << '\n';
}

/// Checks cross-field invariants; throws ParseError without a line number.
inline void validate(const RunConfig& c) {
  try {
    validate(c.effective_hybrid());
    validate(c.sim);
    validate(c.plant);
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
  ControllerParams probe;
  probe.gains = c.gains;
  if (auto err = fuzzytune::validate(probe)) throw ParseError(0, *err);
}

/// Missing keys keep their defaults; unknown keys are rejected.
inline RunConfig read_run_config(std::istream& in) {
  RunConfig c;
  for (const KeyValueLine& kv : read_key_values(in)) {
    const detail::ConfigField* field = nullptr;
    for (const auto& f : detail::config_fields()) {
      if (f.key == kv.key) field = &f;
    }
    if (field == nullptr) throw ParseError(kv.line, "unknown key '" + kv.key + "'");
    if (!field->set(c, kv.value)) throw ParseError(kv.line, "invalid value '" + kv.value + "' for '" + kv.key + "'");
  }
  validate(c);
  return c;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kTraceHeader = "t,theta,theta_dot,u,e";
inline constexpr std::string_view kHistoryHeader = "phase,generation,iteration,evaluations,best_mse";
inline constexpr std::string_view kSweepHeader = "theta0,settled,settling_time,final_abs_theta";

inline void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << kTraceHeader << '\n';
  for (const TraceSample& s : trace.samples) {
    out << format_double(s.t, 12) << ',' << format_double(s.theta, 12) << ',' << format_double(s.theta_dot, 12) << ','
        << format_double(s.u, 12) << ',' << format_double(s.e, 12) << '\n';
  }
}

inline void write_history_csv(std::ostream& out, const OptimizationHistory& history) {
  out << kHistoryHeader << '\n';
  for (const HistoryRecord& r : history) {
    out << phase_name(r.phase) << ',' << r.generation << ',' << r.iteration << ',' << r.evaluations << ','
        << format_double(r.best_fitness) << '\n';
  }
}

struct SweepRow {
  double theta0 = 0.0;
  bool settled = false;
  std::optional<double> settling_time;
  double final_abs_theta = 0.0;
};

inline void write_sweep_summary(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const SweepRow& r : rows) {
    out << format_double(r.theta0, 12) << ',' << (r.settled ? "true" : "false") << ','
        << (r.settling_time ? format_double(*r.settling_time, 12) : std::string("none")) << ','
        << format_double(r.final_abs_theta, 12) << '\n';
  }
}

/// Minimal comma-separated table: no quoting, first line is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  }

  /// Numeric column; throws ParseError on a non-numeric cell.
  std::vector<double> numeric_column(std::size_t index) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto v = parse_double(rows[r][index]);
      if (!v) throw ParseError(r + 2, "non-numeric value '" + rows[r][index] + "' in column '" + header[index] + "'");
      out.push_back(*v);
    }
    return out;
  }
};

inline std::vector<std::string> split_commas(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;
    auto cells = split_commas(raw);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ParseError(line, "expected " + std::to_string(table.header.size()) + " cells, got " +
                                 std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) throw ParseError(0, "empty CSV");
  return table;
}

}  // namespace fuzzytune::io
