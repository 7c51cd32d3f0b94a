// fuzzytune: tune, simulate, sweep and plot fuzzy pendulum controllers.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fuzzytune/commands.hpp"

namespace ft = fuzzytune::commands;

int main(int argc, char** argv) {
  CLI::App app{"Hybrid PSO / tabu-search tuning of a three-rule fuzzy pendulum controller"};
  app.require_subcommand(1);

  ft::OptimizeOptions optimize_opts;
  std::uint64_t seed = 0;
  std::string optimize_out;
  auto* optimize = app.add_subcommand("optimize", "Tune controller parameters against the closed-loop MSE");
  optimize->add_option("--config", optimize_opts.config_path, "Run configuration (key = value)")->required();
  auto* seed_opt = optimize->add_option("--seed", seed, "Override the configured seed");
  auto* out_opt = optimize->add_option("--out", optimize_out, "Output directory (overrides output_dir)");

  ft::SimulateOptions simulate_opts;
  std::string simulate_config;
  auto* simulate = app.add_subcommand("simulate", "Simulate one closed-loop response");
  simulate->add_option("--params", simulate_opts.params_path, "Controller parameter file")->required();
  simulate->add_option("--theta0", simulate_opts.theta0, "Initial pendulum angle (rad)")->required();
  simulate->add_option("--out", simulate_opts.out_csv, "Trace CSV to write")->required();
  auto* simulate_cfg = simulate->add_option("--config", simulate_config, "Plant/simulation configuration");

  ft::SweepOptions sweep_opts;
  std::string sweep_config;
  auto* sweep = app.add_subcommand("sweep", "Simulate a range of initial angles");
  sweep->add_option("--params", sweep_opts.params_path, "Controller parameter file")->required();
  sweep->add_option("--min", sweep_opts.theta_min, "Smallest initial angle (rad)")->required();
  sweep->add_option("--max", sweep_opts.theta_max, "Largest initial angle (rad)")->required();
  sweep->add_option("--steps", sweep_opts.steps, "Number of angles (>= 2)")->required();
  sweep->add_option("--out", sweep_opts.out_dir, "Output directory")->required();
  auto* sweep_cfg = sweep->add_option("--config", sweep_config, "Plant/simulation configuration");

  ft::PlotOptions plot_opts;
  std::string y_columns;
  auto* plot = app.add_subcommand("plot", "Render CSV columns as an SVG line chart");
  plot->add_option("--in", plot_opts.in_csv, "Input CSV")->required();
  plot->add_option("--x", plot_opts.x_column, "Column for the x axis")->required();
  plot->add_option("--y", y_columns, "Comma-separated columns for the y axis")->required();
  plot->add_option("--out", plot_opts.out_svg, "SVG to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ft::kExitBadInput;
  }

  if (optimize->parsed()) {
    if (seed_opt->count() > 0) optimize_opts.seed = seed;
    if (out_opt->count() > 0) optimize_opts.out_dir = optimize_out;
    return ft::cmd_optimize(optimize_opts, std::cout, std::cerr);
  }
  if (simulate->parsed()) {
    if (simulate_cfg->count() > 0) simulate_opts.config_path = simulate_config;
    return ft::cmd_simulate(simulate_opts, std::cout, std::cerr);
  }
  if (sweep->parsed()) {
    if (sweep_cfg->count() > 0) sweep_opts.config_path = sweep_config;
    return ft::cmd_sweep(sweep_opts, std::cout, std::cerr);
  }
  if (plot->parsed()) {
    std::string cell;
    for (char ch : y_columns + ",") {
      if (ch == ',') {
        if (!cell.empty()) plot_opts.y_columns.push_back(cell);
        cell.clear();
      } else {
        cell += ch;
      }
    }
    return ft::cmd_plot(plot_opts, std::cout, std::cerr);
  }
  return ft::kExitBadInput;
}
