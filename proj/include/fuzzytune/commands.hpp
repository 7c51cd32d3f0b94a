#pragma once

// Campaign commands behind the command-line tool. Each returns a process exit
// status: 0 success, 2 bad input (config, parameters, arguments), 3 filesystem.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fuzzytune/closed_loop.hpp"
#include "fuzzytune/hybrid.hpp"
#include "fuzzytune/io.hpp"
#include "fuzzytune/random.hpp"
#include "fuzzytune/svg.hpp"

namespace fuzzytune::commands {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitFilesystem = 3;

namespace fs = std::filesystem;

namespace detail {

struct FsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FsError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FsError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw FsError("write failed for " + path.string());
}

inline void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw FsError("cannot create directory " + dir.string());
}

template <class Writer>
std::string render(Writer&& writer) {
  std::ostringstream ss;
  writer(ss);
  return ss.str();
}

inline std::string format_settling(std::optional<double> ts) {
  return ts ? io::format_double(*ts, 6) : std::string("unstable");
}

}  // namespace detail

struct OptimizeOptions {
  fs::path config_path;
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> out_dir;
};

/// Runs the hybrid optimizer and writes best_params.txt, history.csv,
/// trace_best.csv and run_meta.txt into the output directory.
inline int cmd_optimize(const OptimizeOptions& opt, std::ostream& out, std::ostream& err) {
  io::RunConfig config;
  try {
    std::istringstream text(detail::read_file(opt.config_path));
    config = io::read_run_config(text);
  } catch (const detail::FsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFilesystem;
  } catch (const io::ParseError& e) {
    err << "error: " << opt.config_path.string() << ": " << e.what() << '\n';
    return kExitBadInput;
  }
  if (opt.seed) config.seed = *opt.seed;
  if (opt.out_dir) config.output_dir = opt.out_dir->string();

  const auto start = std::chrono::steady_clock::now();
  const OptimizeResult result = optimize(config.effective_hybrid(), config.plant, config.sim, config.gains);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const Trace trace = simulate(result.best, config.plant, config.sim);
  const auto ts = settling_time(trace, settling_band(config.sim.theta0));

  try {
    const fs::path dir = config.output_dir;
    detail::ensure_directory(dir);
    detail::write_file(dir / "best_params.txt", detail::render([&](std::ostream& s) { io::write_params(s, result.best); }));
    detail::write_file(dir / "history.csv",
                       detail::render([&](std::ostream& s) { io::write_history_csv(s, result.history); }));
    detail::write_file(dir / "trace_best.csv", detail::render([&](std::ostream& s) { io::write_trace_csv(s, trace); }));
    detail::write_file(dir / "run_meta.txt", detail::render([&](std::ostream& s) {
                         // Metadata lines are comments so the file doubles as a config.
                         s << "# seed = " << config.seed << '\n'
                           << "# seed_source = " << (opt.seed ? "command-line" : "config") << '\n'
                           << "# prng = " << kPrngId << '\n'
                           << "# evaluations = " << result.evaluations << '\n'
                           << "# best_mse = " << io::format_double(result.best_fitness) << '\n'
                           << "# wall_clock_seconds = " << io::format_double(wall, 6) << '\n'
                           << "# effective config (pass back with --config to reproduce)\n";
                         io::write_run_config(s, config);
                       }));
  } catch (const detail::FsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFilesystem;
  }

  out << "best_mse = " << io::format_double(result.best_fitness, 9) << '\n'
      << "evaluations = " << result.evaluations << '\n'
      << "settling_time = " << detail::format_settling(ts) << '\n'
      << "wall_clock_seconds = " << io::format_double(wall, 6) << '\n';
  return kExitOk;
}

namespace detail {

struct LoadedController {
  ControllerParams params;
  io::RunConfig config;
};

/// Loads the parameter file and the optional plant/sim config. Returns an
/// exit status on failure.
inline std::optional<int> load_controller(const fs::path& params_path, const std::optional<fs::path>& config_path,
                                          LoadedController& loaded, std::ostream& err) {
  try {
    std::istringstream ptext(read_file(params_path));
    loaded.params = io::read_params(ptext);
    if (config_path) {
      std::istringstream ctext(read_file(*config_path));
      loaded.config = io::read_run_config(ctext);
    }
  } catch (const FsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFilesystem;
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  return std::nullopt;
}

}  // namespace detail

struct SimulateOptions {
  fs::path params_path;
  double theta0 = 0.22;
  fs::path out_csv;
  std::optional<fs::path> config_path;
};

/// Writes the closed-loop trace and prints the settling time or "unstable".
inline int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
  detail::LoadedController loaded;
  if (auto status = detail::load_controller(opt.params_path, opt.config_path, loaded, err)) return *status;

  SimConfig sim = loaded.config.sim;
  sim.theta0 = opt.theta0;
  const Trace trace = simulate(loaded.params, loaded.config.plant, sim);
  try {
    if (opt.out_csv.has_parent_path()) detail::ensure_directory(opt.out_csv.parent_path());
    detail::write_file(opt.out_csv, detail::render([&](std::ostream& s) { io::write_trace_csv(s, trace); }));
  } catch (const detail::FsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFilesystem;
  }
  out << detail::format_settling(settling_time(trace, settling_band(opt.theta0))) << '\n';
  return kExitOk;
}

struct SweepOptions {
  fs::path params_path;
  double theta_min = 0.22;
  double theta_max = 0.8;
  std::size_t steps = 4;
  fs::path out_dir;
  std::optional<fs::path> config_path;
};

/// Evenly spaced initial angles, endpoints included.
inline std::vector<double> linspace(double lo, double hi, std::size_t steps) {
  std::vector<double> v(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    v[i] = i + 1 == steps ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  return v;
}

/// One trace per initial angle plus sweep_summary.csv.
inline int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  if (!(opt.theta_min < opt.theta_max)) {
    err << "error: --min must be < --max\n";
    return kExitBadInput;
  }
  if (opt.steps < 2) {
    err << "error: --steps must be >= 2\n";
    return kExitBadInput;
  }
  detail::LoadedController loaded;
  if (auto status = detail::load_controller(opt.params_path, opt.config_path, loaded, err)) return *status;

  std::vector<io::SweepRow> rows;
  try {
    detail::ensure_directory(opt.out_dir);
    const std::vector<double> angles = linspace(opt.theta_min, opt.theta_max, opt.steps);
    for (std::size_t i = 0; i < angles.size(); ++i) {
      SimConfig sim = loaded.config.sim;
      sim.theta0 = angles[i];
      const Trace trace = simulate(loaded.params, loaded.config.plant, sim);
      io::SweepRow row;
      row.theta0 = angles[i];
      row.settling_time = settling_time(trace, settling_band(angles[i]));
      row.settled = row.settling_time.has_value();
      row.final_abs_theta = trace.samples.empty() ? std::abs(sim.theta0) : std::abs(trace.samples.back().theta);
      rows.push_back(row);

      char name[32];
      std::snprintf(name, sizeof name, "trace_%02zu.csv", i);
      detail::write_file(opt.out_dir / name, detail::render([&](std::ostream& s) { io::write_trace_csv(s, trace); }));
      out << "theta0 = " << io::format_double(angles[i], 6) << "  settling_time = "
          << detail::format_settling(row.settling_time) << '\n';
    }
    detail::write_file(opt.out_dir / "sweep_summary.csv",
                       detail::render([&](std::ostream& s) { io::write_sweep_summary(s, rows); }));
  } catch (const detail::FsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFilesystem;
  }
  return kExitOk;
}

struct PlotOptions {
  fs::path in_csv;
  std::string x_column;
  std::vector<std::string> y_columns;
  fs::path out_svg;
};

/// Line chart of one or more CSV columns against another.
inline int cmd_plot(const PlotOptions& opt, std::ostream& /*out*/, std::ostream& err) {
  io::CsvTable table;
  try {
    std::istringstream text(detail::read_file(opt.in_csv));
    table = io::read_csv(text);
  } catch (const detail::FsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFilesystem;
  } catch (const io::ParseError& e) {
    err << "error: " << opt.in_csv.string() << ": " << e.what() << '\n';
    return kExitBadInput;
  }
  if (opt.y_columns.empty()) {
    err << "error: no y columns given\n";
    return kExitBadInput;
  }

  std::string svg;
  try {
    const auto xi = table.column(opt.x_column);
    if (!xi) throw io::ParseError(0, "missing column '" + opt.x_column + "'");
    std::vector<svg::Series> series;
    std::string y_label;
    for (const std::string& name : opt.y_columns) {
      const auto yi = table.column(name);
      if (!yi) throw io::ParseError(0, "missing column '" + name + "'");
      series.push_back({name, table.numeric_column(*yi)});
      y_label += (y_label.empty() ? "" : ", ") + name;
    }
    svg::ChartOptions chart;
    chart.x_label = opt.x_column;
    chart.y_label = y_label;
    svg = svg::line_chart(table.numeric_column(*xi), series, chart);
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }

  try {
    if (opt.out_svg.has_parent_path()) detail::ensure_directory(opt.out_svg.parent_path());
    detail::write_file(opt.out_svg, svg);
  } catch (const detail::FsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFilesystem;
  }
  return kExitOk;
}

}  // namespace fuzzytune::commands
