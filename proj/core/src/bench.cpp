#include "bipi/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "bipi/errors.hpp"
#include "bipi/packing.hpp"

namespace bipi {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("loglog_slope: need >= 2 paired samples");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) throw ConfigError("loglog_slope: all abscissae equal");
  return sxy / sxx;
}

namespace {

template <typename F>
double median_seconds(F&& iteration, int warmup, int repeats) {
  using clock = std::chrono::steady_clock;
  for (int i = 0; i < warmup; ++i) iteration();
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(repeats));
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = clock::now();
    iteration();
    t.push_back(std::chrono::duration<double>(clock::now() - t0).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

}  // namespace

BenchTable bench(const BoundarySet& geometry, const std::vector<double>& resolutions,
                 const BenchOptions& opt) {
  if (resolutions.size() < 3) throw ConfigError("bench: at least 3 resolutions are needed to fit exponents");
  if (opt.repeats < 1 || opt.warmup < 0) throw ConfigError("bench: repeats must be >= 1 and warmup >= 0");
  BenchTable table;
  for (double dx : resolutions) {
    const PackingConfig cfg = PackingConfig::from_resolution(dx, opt.h_ratio);
    const BoundarySet refined = refine_segments(geometry, dx);
    Packer packer(refined, cfg, seed_grid(refined, dx));
    BenchRow row;
    row.dx = dx;
    row.n_total = static_cast<int>(packer.particles().size());

    packer.begin_step_2a();
    row.n_pack_2a = static_cast<int>(packer.packable_ids().size());
    if (row.n_pack_2a == 0) throw ConfigError("bench: no packable particles at dx = " + std::to_string(dx));
    row.sec_2a = median_seconds([&] { packer.iterate(Phase::Step2a); }, opt.warmup, opt.repeats);

    packer.freeze();
    packer.begin_step_2c();
    row.n_pack_2c = static_cast<int>(packer.packable_ids().size());
    if (row.n_pack_2c == 0) throw ConfigError("bench: no unfrozen particles at dx = " + std::to_string(dx));
    row.sec_2c = median_seconds([&] { packer.iterate(Phase::Step2c); }, opt.warmup, opt.repeats);
    table.rows.push_back(row);
  }
  std::vector<double> n, t2a, t2c;
  for (const auto& r : table.rows) {
    n.push_back(r.n_total);
    t2a.push_back(r.sec_2a);
    t2c.push_back(r.sec_2c);
  }
  table.exponent_2a = loglog_slope(n, t2a);
  table.exponent_2c = loglog_slope(n, t2c);
  return table;
}

}  // namespace bipi
