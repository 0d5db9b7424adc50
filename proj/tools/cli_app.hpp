#pragma once

// Command-line front end. Configuration precedence: built-in defaults, then
// the --config JSON document, then explicit flags.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "holonomy/fidelity.hpp"
#include "holonomy/io.hpp"
#include "holonomy/loop.hpp"

namespace holonomy::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3 };

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  std::size_t points = 0;
};

GridSpec parse_grid(const std::string& text);
std::vector<double> parse_list(const std::string& text);

struct RunConfig {
  std::string command;
  std::string loop = "standard";  // standard | wedge:n
  double omega = 1.0;
  bool reverse = false;
  std::optional<GridSpec> grid;
  std::vector<double> omega_tau;  // explicit grid, overrides `grid`
  std::vector<double> lambda_sq{0.0, 0.005, 0.01, 0.02, 0.03, 0.04, 0.05};
  double gamma0 = 1.0;
  std::string noise_file;
  std::size_t states = kDefaultStates;
  std::size_t steps = kDefaultSteps;
  std::string out = ".";
  std::optional<double> calibrate_f2;
  std::vector<double> calibration_lambda_sq{1e-4, 2e-4, 3e-4, 4e-4, 5e-4,
                                            6e-4, 7e-4, 8e-4, 9e-4, 1e-3};
  bool free_intercept = false;
  std::string table;
  PeakSearchOptions peak;

  LoopFamily family() const;
  /// Explicit list, else the grid, else the default plot grid.
  std::vector<double> resolved_grid() const;
  void validate() const;
};

/// Throws Error(InvalidConfig) on unknown keys or wrong types.
void apply_json(RunConfig& cfg, const io::Json& j);
io::Json config_to_json(const RunConfig& cfg);

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace holonomy::cli
