// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// the number of failures. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bipi/bench.hpp"
#include "bipi/drop.hpp"
#include "bipi/errors.hpp"
#include "bipi/kernel.hpp"
#include "bipi/packing.hpp"
#include "bipi/scenarios.hpp"
#include "bipi/wall.hpp"
#include "oracles.hpp"

using namespace bipi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// --- 1-3: kernel and wall renormalization ----------------------------------

Outcome kernel_suite() {
  const double h = 0.04;
  const KernelSpec k(h);
  // composite Simpson on 2 pi r W(r) over [0, 2h]
  const int n = 20000;
  const double dr = k.support() / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = i * dr;
    const double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += wgt * 2.0 * oracle::pi * r * w(r, k);
  }
  const double integral = sum * dr / 3.0;

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ur(0.02 * h, 1.98 * h), ut(0.0, 2.0 * oracle::pi);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double r = ur(rng), t = ut(rng);
    const Vec2 d{r * std::cos(t), r * std::sin(t)};
    const double eps = 1e-6 * h;
    const Vec2 fd{(w(norm(d + Vec2{eps, 0}), k) - w(norm(d - Vec2{eps, 0}), k)) / (2 * eps),
                  (w(norm(d + Vec2{0, eps}), k) - w(norm(d - Vec2{0, eps}), k)) / (2 * eps)};
    worst = std::max(worst, norm(grad_w(d, k) - fd) / norm(fd));
  }
  return {std::abs(integral - 1.0) <= 1e-8 && worst <= 1e-6,
          fmt("|int W - 1| = %.2e, max grad rel err = %.2e", std::abs(integral - 1.0), worst)};
}

Outcome gamma_oracles() {
  const double h = 0.04;
  const KernelSpec k(h);
  const BoundarySet box = rectangle(4.0, 1.0, {-2.0, 0.0});
  const double wall = gamma({0.0, 0.0}, box, k);
  const double corner = gamma({-2.0, 0.0}, box, k);
  const double far = gamma({0.0, 2.0 * h + 1e-9}, box, k);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double d = 2.0 * h * i / 49.0;
    worst = std::max(worst, std::abs(gamma({0.0, d}, box, k) - gamma_halfplane(d, k)));
  }
  const bool ok = std::abs(wall - 0.5) <= 2e-3 && std::abs(corner - 0.25) <= 2e-3 && far == 1.0 && worst <= 1e-4;
  return {ok, fmt("wall %.6f, corner %.6f, beyond 2h %.17g, max |gamma - halfplane| = %.2e", wall, corner,
                  far, worst)};
}

Outcome gamma_gradient() {
  const double h = 0.04;
  const KernelSpec k(h);
  const BoundarySet box = refine_segments(rectangle(4.0, 1.0, {-2.0, 0.0}), 0.02);
  const WallEvaluator ev(box, k);
  double worst = 0.0;
  for (int i = 1; i < 50; ++i) {
    const double d = 2.0 * h * i / 50.0;
    Vec2 g;
    for (const auto& t : ev.evaluate({0.01, d}).terms) g += t.grad_gamma;
    const double fd = oracle::derivative([&](double s) { return gamma({0.01, s}, box, k); }, d, 1e-6 * h);
    worst = std::max(worst, std::abs(g.x2 - fd) / std::abs(fd));
  }
  return {worst <= 1e-3, fmt("max relative error over 49 depths in (0, 2h) = %.2e", worst)};
}

// --- 4-6: packing ------------------------------------------------------------

struct PackCheck {
  PackResult r;
  double worst_shift = 0.0;
  long outside = 0;
  bool frozen_moved = false;
  double standoff = 0.0;  // at termination, over the original geometry
  double gradc_start = 0.0;
  double gradc_end = 0.0;
  double seconds = 0.0;
};

PackCheck pack_checked(const BoundarySet& geometry, const PackingConfig& cfg) {
  PackCheck c;
  const BoundarySet refined = refine_segments(geometry, cfg.dx);
  std::vector<Vec2> end_2a;
  const auto t0 = std::chrono::steady_clock::now();
  auto observe = [&](const IterationRecord& rec, const ParticleSet& p) {
    c.worst_shift = std::max(c.worst_shift, rec.max_shift);
    for (const auto& x : p.position) c.outside += !contains(refined, x);
    if (rec.phase == Phase::Step2a) {
      end_2a = p.position;
      return;
    }
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p.frozen[i] && p.position[i] != end_2a[i]) c.frozen_moved = true;
  };
  c.r = run_bipi(geometry, cfg, observe);
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.standoff = std::numeric_limits<double>::infinity();
  for (const auto& x : c.r.particles.position) c.standoff = std::min(c.standoff, nearest_boundary(geometry, x).distance);
  for (const auto& rec : c.r.history) {
    if (rec.phase != Phase::Step2c) continue;
    if (c.gradc_start == 0.0) c.gradc_start = rec.gradc_avg;
    c.gradc_end = rec.gradc_avg;
  }
  return c;
}

struct InvariantVerdict {
  bool ok = false;
  std::string text;
};

InvariantVerdict invariants(const PackCheck& c, const PackingConfig& cfg) {
  const double drop = c.gradc_end > 0.0 ? c.gradc_start / c.gradc_end : 0.0;
  const bool cap_ok = cfg.cap == 0.5 * cfg.dx && c.worst_shift <= cfg.cap;
  const bool ok = cap_ok && c.outside == 0 && !c.frozen_moved && c.standoff >= 0.4 * cfg.dx && drop >= 100.0;
  return {ok, fmt("max shift %.3f dx, outside %ld, frozen moved %s, standoff %.3f dx, |gradC| drop x%.1f",
                  c.worst_shift / cfg.dx, c.outside, c.frozen_moved ? "yes" : "no", c.standoff / cfg.dx, drop)};
}

PackCheck& trapezoid_run() {
  static PackCheck c = pack_checked(trapezoid(), PackingConfig::from_resolution(0.02, 2.0));
  return c;
}

Outcome packing_invariants() {
  const auto cfg = PackingConfig::from_resolution(0.02, 2.0);
  const auto& c = trapezoid_run();
  const auto v = invariants(c, cfg);
  return {v.ok, fmt("N=%zu, iters 2a/2c %d/%d, ", c.r.particles.size(), c.r.iters_2a, c.r.iters_2c) + v.text};
}

Outcome stopping_behaviour() {
  const auto& h = trapezoid_run().r.history;
  const auto it = std::find_if(h.begin(), h.end(), [](const IterationRecord& r) { return r.phase == Phase::Step2c; });
  bool dip = false;
  std::string dip_text = "no Step 2c records";
  if (it != h.begin() && it != h.end()) {
    const auto& last = *(it - 1);
    dip = it->n_pack > last.n_pack && it->tpd_avg < last.tpd_avg;
    dip_text = fmt("TPD %.3e -> %.3e with n_pack %d -> %d", last.tpd_avg, it->tpd_avg, last.n_pack, it->n_pack);
  }
  const auto cfg = PackingConfig::from_resolution(0.02, 2.0);
  const auto rect = run_bipi(rectangle(1.0, 0.5), cfg);
  const bool quick = rect.converged_2a && rect.iters_2a <= cfg.min_iters + cfg.window;
  return {dip && quick, dip_text + fmt("; rectangle Step 2a %s after %d iterations (limit %d)",
                                       rect.converged_2a ? "stopped" : "hit its budget", rect.iters_2a,
                                       cfg.min_iters + cfg.window)};
}

Outcome parameter_sweep() {
  bool ok = true;
  std::string text;
  for (const double dx : {0.04, 0.02}) {
    for (const double hr : {1.2, 2.0, 3.0}) {
      const auto cfg = PackingConfig::from_resolution(dx, hr);
      const PackCheck c = (dx == 0.02 && hr == 2.0) ? trapezoid_run() : pack_checked(trapezoid(), cfg);
      const auto v = invariants(c, cfg);
      const bool stopped = c.r.converged_2a && c.r.converged_2c;
      ok = ok && stopped && v.ok;
      text += fmt("\n    dx=%.2f h/dx=%.1f: %s, stopped 2a/2c %d/%d, ", dx, hr, stopped && v.ok ? "ok" : "FAIL",
                  c.r.converged_2a, c.r.converged_2c) + v.text;
    }
  }
  return {ok, "6 runs" + text};
}

// --- 7-8: flow ---------------------------------------------------------------

Outcome hydrostatic() {
  HydrostaticConfig cfg;
  cfg.packing = PackingConfig::from_resolution(cfg.dx, cfg.h_ratio);
  const BoundarySet pack_b = wedge_tank(cfg.water_depth);
  const BoundarySet flow_b = wedge_tank(cfg.water_depth + 2.0 * KernelSpec::kappa * cfg.h_ratio * cfg.dx);
  double ke[2] = {0.0, 0.0};
  double slope = 0.0;
  std::string text;
  bool ran = true;
  for (const InitMode m : {InitMode::Grid, InitMode::Bipi}) {
    try {
      const auto r = run_hydrostatic(pack_b, flow_b, cfg, m);
      ke[m == InitMode::Bipi] = r.series.back().ke;
      if (m == InitMode::Bipi) slope = r.pressure_fit.slope / (r.fluid.rho0 * cfg.gravity);
      text += fmt("%s KE(t_end)=%.4e J; ", std::string(to_string(m)).c_str(), r.series.back().ke);
    } catch (const NumericalAbort& e) {
      ran = false;
      text += std::string(to_string(m)) + " aborted: " + e.what() + "; ";
    }
  }
  const bool ok = ran && ke[1] < ke[0] && std::abs(slope - 1.0) <= 0.05;
  return {ok, text + fmt("BIPI slope / rho0 g = %.4f", slope)};
}

Outcome drop() {
  double worst_ab = 0.0;
  for (const auto& s : drop_oracle(1.0, 1.0, 2.0)) worst_ab = std::max(worst_ab, std::abs(s.a * s.b - 1.0));
  DropConfig cfg;
  cfg.dx = cfg.R0 / 25.0;
  cfg.packing = PackingConfig::from_resolution(cfg.dx, cfg.h_ratio);
  double dev[2] = {0.0, 0.0};
  double ratio_err = 1.0;
  std::string text;
  bool ran = true;
  for (const InitMode m : {InitMode::Grid, InitMode::Bipi}) {
    try {
      const auto r = run_drop(cfg, m);
      dev[m == InitMode::Bipi] = r.edge_deviation;
      const double e = std::abs(r.fit_ratio() / r.oracle_ratio() - 1.0);
      if (m == InitMode::Bipi) ratio_err = e;
      text += fmt("%s axis ratio %.4f (oracle %.4f), edge deviation %.4e; ", std::string(to_string(m)).c_str(),
                  r.fit_ratio(), r.oracle_ratio(), r.edge_deviation);
    } catch (const NumericalAbort& e) {
      ran = false;
      text += std::string(to_string(m)) + " aborted: " + e.what() + "; ";
    }
  }
  const bool ok = worst_ab <= 1e-12 && ran && ratio_err <= 0.05 && dev[1] <= dev[0];
  return {ok, text + fmt("oracle max |ab - R0^2| = %.1e", worst_ab)};
}

// --- 9-10 ----------------------------------------------------------------------

Outcome complexity() {
  const auto t = bench(trapezoid(), {0.04, 0.028, 0.02, 0.014, 0.01});
  const double range = static_cast<double>(t.rows.back().n_total) / t.rows.front().n_total;
  const bool ok = range >= 8.0 && t.exponent_2a < t.exponent_2c;
  return {ok, fmt("N %d..%d (x%.1f), exponent 2a %.3f, 2c %.3f", t.rows.front().n_total, t.rows.back().n_total,
                  range, t.exponent_2a, t.exponent_2c)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "bipi_acceptance_determinism";
  std::string csv[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path out = root / std::to_string(i);
    fs::remove_all(out);
    const std::string cmd = std::string("\"") + BIPI_CLI + "\" pack --geometry \"" + BIPI_DATA_DIR +
                            "/trapezoid.bnd\" --dx 0.04 --out \"" + out.string() + "\" > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, "pack run failed: " + cmd};
    csv[i] = slurp(out / "metrics.csv");
  }
  const auto lines = std::count(csv[0].begin(), csv[0].end(), '\n');
  return {!csv[0].empty() && csv[0] == csv[1], fmt("%ld metrics lines, identical: %s", static_cast<long>(lines),
                                                   csv[0] == csv[1] ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"kernel normalization and gradient", kernel_suite},
      {"gamma oracles", gamma_oracles},
      {"boundary gradient vs d(gamma)/dd", gamma_gradient},
      {"packing invariants on the trapezoid", packing_invariants},
      {"stopping-criteria behaviour", stopping_behaviour},
      {"parameter sweep", parameter_sweep},
      {"hydrostatic wedge tank", hydrostatic},
      {"elliptical drop", drop},
      {"complexity ordering", complexity},
      {"determinism of pack", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("%s %2d %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, s, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
