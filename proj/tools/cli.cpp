#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tbc2d/harness.hpp"

namespace tbc2d {

namespace {

void add_config_options(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
  cmd->add_option("--config", config_path, "key=value configuration file");
  cmd->add_option("--engine", cfg.engine, "hf | tbc");
  cmd->add_option("--variant", cfg.variant, "cq | cp (hf), cq | np (tbc)");
  cmd->add_option("--stepper", cfg.stepper, "bdf1 | bdf2 | tr");
  cmd->add_option("--n", [&cfg](const std::vector<std::string>& v) {
    cfg.n1 = cfg.n2 = std::stoi(v.at(0));
    return true;
  }, "basis degree in both directions");
  cmd->add_option("--n1", cfg.n1, "basis degree, x direction");
  cmd->add_option("--n2", cfg.n2, "basis degree, y direction");
  cmd->add_option("--dt", cfg.dt, "time step");
  cmd->add_option("--nt", cfg.nt, "number of time points (t_max/dt + 1)");
  cmd->add_option("--tmax", cfg.t_max, "final time");
  cmd->add_option("--pade-order", cfg.pade_order, "diagonal Pade order");
  cmd->add_option("--family", cfg.family, "cg | hg");
  cmd->add_option("--type", cfg.profile_type, "iia | iib");
  cmd->add_option("--c0", cfg.speed, "profile speed");
  cmd->add_option("--xl", cfg.x_left, "domain left edge");
  cmd->add_option("--xr", cfg.x_right, "domain right edge");
  cmd->add_option("--xb", cfg.x_bottom, "domain bottom edge");
  cmd->add_option("--xt", cfg.x_top, "domain top edge");
  cmd->add_option("--out-dir", cfg.output_dir, "output directory");
}

RunConfig merge_config(const std::string& config_path, const RunConfig& overrides,
                       const RunConfig& defaults) {
  if (config_path.empty()) return overrides;
  // file first, then every field the command line changed on top of it
  RunConfig cfg = parse_config_file(config_path);
  const RunConfig& d = defaults;
  const RunConfig& o = overrides;
  if (o.engine != d.engine) cfg.engine = o.engine;
  if (o.variant != d.variant) cfg.variant = o.variant;
  if (o.stepper != d.stepper) cfg.stepper = o.stepper;
  if (o.n1 != d.n1) cfg.n1 = o.n1;
  if (o.n2 != d.n2) cfg.n2 = o.n2;
  if (o.dt != d.dt) cfg.dt = o.dt;
  if (o.nt != d.nt) cfg.nt = o.nt;
  if (o.t_max != d.t_max) cfg.t_max = o.t_max;
  if (o.pade_order != d.pade_order) cfg.pade_order = o.pade_order;
  if (o.family != d.family) cfg.family = o.family;
  if (o.profile_type != d.profile_type) cfg.profile_type = o.profile_type;
  if (o.speed != d.speed) cfg.speed = o.speed;
  if (o.x_left != d.x_left) cfg.x_left = o.x_left;
  if (o.x_right != d.x_right) cfg.x_right = o.x_right;
  if (o.x_bottom != d.x_bottom) cfg.x_bottom = o.x_bottom;
  if (o.x_top != d.x_top) cfg.x_top = o.x_top;
  if (o.output_dir != d.output_dir) cfg.output_dir = o.output_dir;
  if (!o.dump_times.empty()) cfg.dump_times = o.dump_times;
  return cfg;
}

std::vector<int> default_step_counts() { return {128, 256, 512, 1024, 2048}; }

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Spectral solvers for the free Schrodinger equation on a rectangle"
               " with transparent and high-frequency boundary conditions"};
  app.require_subcommand(1);

  RunConfig defaults;
  RunConfig cfg;
  std::string config_path;
  std::string out_csv = "evolution.csv";
  std::string conv_csv = "convergence.csv";
  std::vector<Real> times;
  std::vector<int> step_counts = default_step_counts();
  int weight_count = 64;
  std::string weights_out = "weights.csv";
  std::string matrices_out = "matrices.dat";

  CLI::App* evolve = app.add_subcommand("evolve", "run one evolution and write t,e(t)");
  add_config_options(evolve, cfg, config_path);
  evolve->add_option("--out", out_csv, "evolution CSV path");

  CLI::App* converge = app.add_subcommand("converge", "run a dt sweep and fit the slope");
  add_config_options(converge, cfg, config_path);
  converge->add_option("--steps-list", step_counts, "step counts of the sweep")
      ->delimiter(',');
  converge->add_option("--out", conv_csv, "convergence CSV path");

  CLI::App* dumpf = app.add_subcommand("dump-field", "write solution snapshots");
  add_config_options(dumpf, cfg, config_path);
  dumpf->add_option("--times", times, "snapshot times")->delimiter(',');

  CLI::App* weights = app.add_subcommand("weights", "dump CQ weight tables as CSV");
  weights->add_option("--count", weight_count, "number of weights per scheme");
  weights->add_option("--out", weights_out, "CSV path");

  CLI::App* dumpm = app.add_subcommand("dump-matrices",
                                       "dump assembled operators as sparse triplets");
  add_config_options(dumpm, cfg, config_path);
  dumpm->add_option("--out", matrices_out, "triplet file path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (evolve->parsed()) {
      RunConfig merged = merge_config(config_path, cfg, defaults);
      merged.finalize();
      const EvolutionResult res = run_evolution(merged, out_csv);
      std::cout << "max error " << res.max_error() << " over " << merged.steps()
                << " steps -> " << out_csv << "\n";
    } else if (converge->parsed()) {
      RunConfig merged = merge_config(config_path, cfg, defaults);
      if (merged.dt <= 0 && merged.nt <= 0) merged.nt = 2;  // per-run grids come from the sweep
      merged.finalize();
      const ConvergenceResult res = run_convergence(merged, step_counts, conv_csv);
      for (const auto& p : res.points)
        std::cout << "dt " << p.dt << "  e_max " << p.max_error << "\n";
      if (res.slope)
        std::cout << "slope " << *res.slope << " -> " << conv_csv << "\n";
      else
        std::cout << "slope undefined (fewer than 3 pre-plateau points) -> "
                  << conv_csv << "\n";
    } else if (dumpf->parsed()) {
      RunConfig merged = merge_config(config_path, cfg, defaults);
      if (!times.empty()) merged.dump_times = times;
      merged.finalize();
      dump_field(merged, merged.dump_times);
      std::cout << "wrote " << merged.dump_times.size() << " snapshots to "
                << merged.output_dir << "\n";
    } else if (weights->parsed()) {
      std::ofstream os(weights_out);
      if (!os) throw std::runtime_error("cannot open " + weights_out);
      dump_weights_csv(os, weight_count);
      std::cout << "wrote " << weights_out << "\n";
    } else if (dumpm->parsed()) {
      RunConfig merged = merge_config(config_path, cfg, defaults);
      merged.finalize();
      std::ofstream os(matrices_out);
      if (!os) throw std::runtime_error("cannot open " + matrices_out);
      dump_matrices(merged, os);
      std::cout << "wrote " << matrices_out << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace tbc2d

