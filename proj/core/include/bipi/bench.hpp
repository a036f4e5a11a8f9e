#pragma once

#include <vector>

#include "bipi/geometry.hpp"

namespace bipi {

struct BenchRow {
  double dx = 0.0;
  int n_total = 0;
  int n_pack_2a = 0;
  int n_pack_2c = 0;
  double sec_2a = 0.0;  // median seconds per iteration
  double sec_2c = 0.0;
};

struct BenchTable {
  std::vector<BenchRow> rows;
  double exponent_2a = 0.0;  // least-squares slope of log(sec) against log(N)
  double exponent_2c = 0.0;
};

struct BenchOptions {
  double h_ratio = 2.0;
  int warmup = 5;
  int repeats = 11;
};

/// Per-iteration wall time of Step 2a and Step 2c at each resolution, using
/// a monotonic clock, with warmup iterations and the median of the repeats.
/// Throws ConfigError for fewer than 3 resolutions.
BenchTable bench(const BoundarySet& geometry, const std::vector<double>& resolutions,
                 const BenchOptions& opt = {});

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bipi
