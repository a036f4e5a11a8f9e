#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bipi/packing.hpp"
#include "bipi/scenarios.hpp"

namespace bipi::cli {

/// Fully resolved command line. Defaults follow the library defaults.
struct RunConfig {
  std::string command;  // seed | pack | hydrostatic | drop | bench
  std::string geometry;
  double dx = 0.02;
  double h_ratio = 2.0;
  double J = 0.5;
  double tol = 0.01;
  int window = 50;
  int min_iters = 200;
  int max_iters_2a = 20000;
  int max_iters_2c = 40000;
  double k_b_ratio = 0.6;  // k_b / dx
  bool plain_shift = false;
  std::optional<double> free_surface_y;
  std::string out = "out";

  // flow scenarios
  double t_end = 0.0;  // 0 = scenario default
  std::string init = "bipi";
  std::optional<double> mu;
  double c0 = 0.0;  // 0 = scenario default
  double pb = 0.0;
  double water_depth = 0.5;
  double r0 = 1.0;
  double a0 = 1.0;

  // bench
  std::vector<double> resolutions{0.04, 0.028, 0.02, 0.014, 0.01};
  int warmup = 5;
  int repeats = 11;

  long long seed = 0;  // reserved; the core is deterministic

  [[nodiscard]] PackingConfig packing() const;
};

/// Parse `args` (without the program name). A `--config FILE` of key=value
/// lines supplies defaults for the chosen subcommand; keys are long option
/// names. A key also given as a flag is overridden by the flag, with a
/// warning on `log`.
///
/// Throws ConfigError for unknown keys or options, out-of-range values and a
/// missing geometry. Returns std::nullopt after printing help to `out`.
std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::ostream& out,
                                      std::ostream& log);

}  // namespace bipi::cli
