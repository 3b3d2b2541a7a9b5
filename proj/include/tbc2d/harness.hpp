#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbc2d/exact.hpp"
#include "tbc2d/hf_engine.hpp"
#include "tbc2d/tbc_engine.hpp"

namespace tbc2d {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One experiment description: domain, basis sizes, time grid, engine/variant/
// stepper selection, initial profile, and output locations. The time grid can
// be given either as dt or as the number of time points nt (nt = t_max/dt + 1);
// whichever is missing is derived, and contradictory values are rejected.
struct RunConfig {
  Real x_left = -10, x_right = 10, x_bottom = -10, x_top = 10;
  int n1 = 64, n2 = 64;
  Real t_max = 1.5;
  Real dt = 0;
  int nt = 0;
  std::string engine = "hf";         // hf | tbc
  std::string variant = "cq";        // cq | cp (hf);  cq | np (tbc)
  std::string stepper = "tr";        // bdf1 | bdf2 | tr
  int pade_order = 30;
  std::string family = "cg";         // cg | hg
  std::string profile_type = "iia";  // iia | iib
  Real speed = 8.0;
  std::string output_dir = ".";
  std::vector<Real> dump_times;

  void finalize();        // resolve dt/nt, then validate; throws ConfigError
  int steps() const { return nt - 1; }
  DomainMap domain() const;
  Profile profile() const;
  Stepper stepper_enum() const;
};

RunConfig parse_config_file(const std::string& path);
void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value);

struct EvolutionResult {
  std::vector<Real> times;
  std::vector<Real> errors;
  Real max_error() const;
};

// Relative L2 error against the exact profile at every time point, written as
// CSV "t,e" when a path is given.
EvolutionResult run_evolution(const RunConfig& cfg, const std::string& csv_path = "");

struct ConvergencePoint {
  Real dt;
  Real max_error;
};

struct ConvergenceResult {
  std::vector<ConvergencePoint> points;
  std::optional<Real> slope;
};

// Max-in-time error per dt, one evolution run per entry of step_counts
// (dt = t_max / steps), plus the fitted pre-plateau slope.
ConvergenceResult run_convergence(const RunConfig& base,
                                  const std::vector<int>& step_counts,
                                  const std::string& csv_path = "");

// Least-squares slope of log e against log dt. Points within a factor 2 of
// the smallest error are treated as plateau and excluded; fewer than 3
// surviving points leaves the slope undefined.
std::optional<Real> fit_loglog_slope(const std::vector<ConvergencePoint>& pts);

// Solution snapshots on a uniform 256x256 grid: a header line followed by
// rows "x1 x2 Re(u) Im(u) log10|u|" (log clamped at -16).
void dump_field(const RunConfig& cfg, const std::vector<Real>& times);

void dump_weights_csv(std::ostream& os, int count);
void dump_matrices(const RunConfig& cfg, std::ostream& os);

int cli_main(int argc, char** argv);

}  // namespace tbc2d
