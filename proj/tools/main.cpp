#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <iostream>
#include <string>
#include <vector>

#include "bipi/bench.hpp"
#include "bipi/errors.hpp"
#include "bipi/io.hpp"
#include "bipi/packing.hpp"
#include "bipi/scenarios.hpp"
#include "cli_config.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace bipi::cli {
namespace {

BoundarySet load_geometry(const RunConfig& c) {
  BoundarySet b = load_boundary(c.geometry);
  if (c.free_surface_y) {
    const double y = *c.free_surface_y;
    const double tol = 1e-12 * std::max(1.0, std::abs(y));
    b = mark_packing_only(std::move(b), [&](const Segment& s) {
      return std::abs(s.a.x2 - y) <= tol && std::abs(s.b.x2 - y) <= tol;
    });
  }
  return b;
}

void write_json(const fs::path& path, const ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

IterationObserver progress() {
  return [](const IterationRecord& r, const ParticleSet&) {
    if (r.iter % 500 == 0) {
      std::fprintf(stderr, "  [%s] iter %d  TPD_avg %.4e  |gradC|_avg %.4e  n_pack %d\n",
                   std::string(to_string(r.phase)).c_str(), r.iter, r.tpd_avg, r.gradc_avg, r.n_pack);
    }
  };
}

void write_packing(const fs::path& dir, const PackResult& r) {
  write_particles_csv(r.particles, dir / "particles.csv");
  write_vtk(r.particles, dir / "particles.vtk");
  write_metrics_csv(r.history, dir / "metrics.csv");
  render_svg_scatter(r.particles, r.boundary, ColorField::GradCMag, dir / "gradc.svg");
  render_svg_scatter(r.particles, r.boundary, ColorField::Gamma, dir / "gamma.svg");
}

ordered_json packing_summary(const PackResult& r) {
  double standoff = std::numeric_limits<double>::infinity();
  for (const auto& x : r.particles.position) standoff = std::min(standoff, nearest_boundary(r.boundary, x).distance);
  return {{"particles", r.particles.size()},     {"iters_2a", r.iters_2a},
          {"iters_2c", r.iters_2c},              {"converged_2a", r.converged_2a},
          {"converged_2c", r.converged_2c},      {"frozen", r.n_frozen},
          {"freeze_gamma", r.freeze_gamma},      {"min_standoff", standoff}};
}

int cmd_seed(const RunConfig& c) {
  const BoundarySet refined = refine_segments(load_geometry(c), c.dx);
  Packer packer(refined, c.packing(), seed_grid(refined, c.dx));
  packer.evaluate_fields();
  const fs::path dir = c.out;
  write_particles_csv(packer.particles(), dir / "particles.csv");
  write_vtk(packer.particles(), dir / "particles.vtk");
  render_svg_scatter(packer.particles(), refined, ColorField::GradCMag, dir / "gradc.svg");
  std::printf("seeded %zu particles -> %s\n", packer.particles().size(), dir.string().c_str());
  return 0;
}

int cmd_pack(const RunConfig& c) {
  const PackResult r = run_bipi(load_geometry(c), c.packing(), progress());
  const fs::path dir = c.out;
  write_packing(dir, r);
  const ordered_json s = packing_summary(r);
  write_json(dir / "summary.json", s);
  std::printf("%s\n", s.dump().c_str());
  return 0;
}

ordered_json series_tail(const std::vector<TimeSample>& s) {
  return {{"t", s.back().t}, {"ke", s.back().ke}, {"max_density_error", s.back().max_density_error}};
}

int cmd_hydrostatic(const RunConfig& c) {
  HydrostaticConfig h;
  h.dx = c.dx;
  h.h_ratio = c.h_ratio;
  h.water_depth = c.water_depth;
  if (c.t_end > 0.0) h.t_end = c.t_end;
  if (c.mu) h.mu = *c.mu;
  h.c0 = c.c0;
  h.p_b = c.pb;
  h.packing = c.packing();

  BoundarySet pack_b;
  BoundarySet flow_b;
  if (c.geometry.empty()) {
    pack_b = wedge_tank(c.water_depth);
    // Side walls rise above the water so the surface sees no wall ends.
    flow_b = wedge_tank(c.water_depth + 2.0 * KernelSpec::kappa * c.h_ratio * c.dx);
  } else {
    RunConfig g = c;
    if (!g.free_surface_y) g.free_surface_y = load_boundary(c.geometry).bbox.max.x2;
    pack_b = load_geometry(g);
    flow_b = pack_b;
  }
  const InitMode init = parse_init_mode(c.init);

  const HydrostaticResult r = run_hydrostatic(pack_b, flow_b, h, init);
  const fs::path dir = c.out;
  write_time_series_csv(r.series, dir / "time_series.csv");
  write_fluid_csv(r.final, dir / "final.csv");
  ordered_json s = {{"init", to_string(init)},
                    {"particles", r.final.size()},
                    {"dt", r.dt.dt},
                    {"dt_binding", r.dt.binding},
                    {"steps", r.steps},
                    {"c0", r.fluid.c0},
                    {"final", series_tail(r.series)},
                    {"pressure_slope", r.pressure_fit.slope},
                    {"pressure_slope_over_rho0_g", r.pressure_fit.slope / (r.fluid.rho0 * h.gravity)}};
  if (r.packing) {
    write_packing(dir / "packing", *r.packing);
    s["packing"] = packing_summary(*r.packing);
  }
  write_json(dir / "summary.json", s);
  std::printf("%s\n", s.dump().c_str());
  return 0;
}

int cmd_drop(const RunConfig& c) {
  DropConfig d;
  d.R0 = c.r0;
  d.A0 = c.a0;
  d.dx = c.dx;
  d.h_ratio = c.h_ratio;
  d.c0 = c.c0;
  if (c.mu) d.mu = *c.mu;
  d.t_end = c.t_end;
  d.packing = c.packing();
  const InitMode init = parse_init_mode(c.init);
  const DropResult r = run_drop(d, init);
  const fs::path dir = c.out;
  write_time_series_csv(r.series, dir / "time_series.csv");
  write_fluid_csv(r.final, dir / "final.csv");
  ordered_json s = {{"init", to_string(init)},
                    {"particles", r.final.size()},
                    {"dt", r.dt.dt},
                    {"dt_binding", r.dt.binding},
                    {"steps", r.steps},
                    {"t_end", r.final.t},
                    {"fit_a", r.fit.a},
                    {"fit_b", r.fit.b},
                    {"fit_ratio", r.fit_ratio()},
                    {"oracle_a", r.oracle.a},
                    {"oracle_b", r.oracle.b},
                    {"oracle_ratio", r.oracle_ratio()},
                    {"edge_deviation", r.edge_deviation}};
  if (r.packing) {
    write_packing(dir / "packing", *r.packing);
    s["packing"] = packing_summary(*r.packing);
  }
  write_json(dir / "summary.json", s);
  std::printf("%s\n", s.dump().c_str());
  return 0;
}

int cmd_bench(const RunConfig& c) {
  const BenchTable t = bench(load_geometry(c), c.resolutions, {c.h_ratio, c.warmup, c.repeats});
  std::string csv = "dx,n_total,n_pack_2a,n_pack_2c,sec_per_iter_2a,sec_per_iter_2c\n";
  std::printf("%10s %8s %8s %8s %14s %14s\n", "dx", "N", "n_2a", "n_2c", "s/iter 2a", "s/iter 2c");
  for (const auto& r : t.rows) {
    csv += fmt17(r.dx) + ',' + std::to_string(r.n_total) + ',' + std::to_string(r.n_pack_2a) + ',' +
           std::to_string(r.n_pack_2c) + ',' + fmt17(r.sec_2a) + ',' + fmt17(r.sec_2c) + '\n';
    std::printf("%10.4g %8d %8d %8d %14.6g %14.6g\n", r.dx, r.n_total, r.n_pack_2a, r.n_pack_2c, r.sec_2a, r.sec_2c);
  }
  std::printf("scaling exponent (time ~ N^p): step 2a %.3f, step 2c %.3f\n", t.exponent_2a, t.exponent_2c);
  const fs::path dir = c.out;
  write_text(dir / "bench.csv", csv);
  write_json(dir / "summary.json", {{"exponent_2a", t.exponent_2a}, {"exponent_2c", t.exponent_2c}});
  return 0;
}

}  // namespace
}  // namespace bipi::cli

int main(int argc, char** argv) {
  using namespace bipi;
  try {
    const auto cfg = cli::parse_config(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
    if (!cfg) return 0;
    if (cfg->command == "seed") return cli::cmd_seed(*cfg);
    if (cfg->command == "pack") return cli::cmd_pack(*cfg);
    if (cfg->command == "hydrostatic") return cli::cmd_hydrostatic(*cfg);
    if (cfg->command == "drop") return cli::cmd_drop(*cfg);
    if (cfg->command == "bench") return cli::cmd_bench(*cfg);
    std::cerr << "error: unknown command\n";
    return 1;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
