#include "bipi/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bipi/errors.hpp"

namespace bipi {

BoundarySet trapezoid() {
  return make_boundary({{{0.0, 0.0}, {1.0, 0.0}, {0.75, 0.5}, {0.2, 0.5}}});
}

BoundarySet rectangle(double w, double h, Vec2 origin) {
  const Vec2 o = origin;
  return make_boundary({{o, o + Vec2{w, 0.0}, o + Vec2{w, h}, o + Vec2{0.0, h}}});
}

BoundarySet wedge_tank(double height) {
  constexpr double width = 2.05;
  const double hw = std::numbers::sqrt2 / 8.0;  // wedge height; 45 degree flanks
  const double xc = 0.5 * width;
  if (!(height > hw)) throw GeometryError("wedge_tank: height must exceed the wedge");
  BoundarySet b = make_boundary({{{0.0, 0.0},
                                  {xc - hw, 0.0},
                                  {xc, hw},
                                  {xc + hw, 0.0},
                                  {width, 0.0},
                                  {width, height},
                                  {0.0, height}}});
  return mark_packing_only(std::move(b), [&](const Segment& s) {
    return s.a.x2 == height && s.b.x2 == height;
  });
}

BoundarySet circle(double radius, int edges, Vec2 center) {
  if (edges < 3) throw GeometryError("circle: need at least 3 edges");
  std::vector<Vec2> v;
  v.reserve(static_cast<std::size_t>(edges));
  for (int i = 0; i < edges; ++i) {
    const double th = 2.0 * std::numbers::pi * i / edges;
    v.push_back(center + Vec2{radius * std::cos(th), radius * std::sin(th)});
  }
  return mark_packing_only(make_boundary({v}), [](const Segment&) { return true; });
}

std::string_view to_string(InitMode m) { return m == InitMode::Grid ? "grid" : "bipi"; }

InitMode parse_init_mode(std::string_view s) {
  if (s == "grid") return InitMode::Grid;
  if (s == "bipi") return InitMode::Bipi;
  throw ConfigError("init mode must be 'grid' or 'bipi', got '" + std::string(s) + "'");
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 paired samples");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

namespace {

double max_density_error(const FluidState& s, double rho0) {
  double e = 0.0;
  for (double r : s.rho) e = std::max(e, std::abs(r / rho0 - 1.0));
  return e;
}

struct RunOutcome {
  int steps = 0;
  std::vector<TimeSample> series;
};

RunOutcome integrate(FluidModel& model, FluidState& s, const TimeStep& ts, double t_end, int samples,
                     double max_err, const StepObserver& observer) {
  RunOutcome out;
  const double rho0 = model.config().rho0;
  out.steps = t_end > 0.0 ? static_cast<int>(std::ceil(t_end / ts.dt - 1e-9)) : 0;
  const double dt = out.steps > 0 ? t_end / out.steps : 0.0;
  const int every = std::max(1, out.steps / std::max(1, samples));
  out.series.push_back({s.t, kinetic_energy(s), max_density_error(s, rho0)});
  for (int k = 1; k <= out.steps; ++k) {
    model.step(s, dt);
    const double err = max_density_error(s, rho0);
    if (err > max_err) {
      throw NumericalAbort("density excursion " + std::to_string(err) + " exceeds " +
                           std::to_string(max_err) + " at t = " + std::to_string(s.t) + " s");
    }
    if (k % every == 0 || k == out.steps) out.series.push_back({s.t, kinetic_energy(s), err});
    if (observer) observer(s);
  }
  return out;
}

std::vector<Vec2> initial_positions(const BoundarySet& packing_boundary, const PackingConfig& pc,
                                    InitMode init, std::optional<PackResult>& packed) {
  if (init == InitMode::Bipi) {
    packed = run_bipi(packing_boundary, pc);
    return packed->particles.position;
  }
  return seed_grid(refine_segments(packing_boundary, pc.dx), pc.dx).position;
}

}  // namespace

HydrostaticResult run_hydrostatic(const BoundarySet& packing_boundary, const BoundarySet& flow_boundary,
                                  const HydrostaticConfig& cfg, InitMode init,
                                  const StepObserver& observer) {
  HydrostaticResult res;
  res.init = init;
  PackingConfig pc = cfg.packing;
  if (pc.dx != cfg.dx || pc.h != cfg.h_ratio * cfg.dx) pc = PackingConfig::from_resolution(cfg.dx, cfg.h_ratio);

  FluidConfig& fc = res.fluid;
  fc.dx = cfg.dx;
  fc.h = cfg.h_ratio * cfg.dx;
  fc.mu = cfg.mu;
  fc.f_ext = {0.0, -cfg.gravity};
  fc.p_b = cfg.p_b;
  fc.delta_diff = cfg.delta_diff;
  fc.c0 = cfg.c0 > 0.0 ? cfg.c0 : 10.0 * std::sqrt(cfg.gravity * cfg.water_depth);
  fc.t_end = cfg.t_end;
  fc.validate();

  const std::vector<Vec2> pos = initial_positions(packing_boundary, pc, init, res.packing);
  std::vector<double> p0(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    p0[i] = fc.rho0 * cfg.gravity * (cfg.water_depth - pos[i].x2) + fc.p_b;
  }
  res.initial = make_state(pos, std::vector<Vec2>(pos.size()), p0, fc);

  // Refined walls: one boundary element per spacing, as for packing.
  const BoundarySet walls = refine_segments(flow_boundary, cfg.dx);
  FluidModel model(walls, fc);
  res.dt = stable_dt(fc);
  FluidState s = res.initial;
  RunOutcome run = integrate(model, s, res.dt, cfg.t_end, cfg.samples, cfg.max_density_error, observer);
  res.steps = run.steps;
  res.series = std::move(run.series);

  std::vector<double> depth(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) depth[i] = cfg.water_depth - s.position[i].x2;
  res.pressure_fit = fit_line(depth, s.p);
  res.final = std::move(s);
  return res;
}

DropResult run_drop(const DropConfig& cfg, InitMode init, const StepObserver& observer) {
  DropResult res;
  res.init = init;
  PackingConfig pc = cfg.packing;
  if (pc.dx != cfg.dx || pc.h != cfg.h_ratio * cfg.dx) pc = PackingConfig::from_resolution(cfg.dx, cfg.h_ratio);

  FluidConfig& fc = res.fluid;
  fc.dx = cfg.dx;
  fc.h = cfg.h_ratio * cfg.dx;
  fc.mu = cfg.mu;
  fc.f_ext = {};
  fc.p_b = 0.0;
  fc.delta_diff = cfg.delta_diff;
  fc.c0 = cfg.c0 > 0.0 ? cfg.c0 : 10.0 * std::abs(cfg.A0) * cfg.R0;
  fc.t_end = cfg.t_end > 0.0 ? cfg.t_end : 2.0 / std::abs(cfg.A0);
  fc.validate();

  const BoundarySet shape = circle(cfg.R0, cfg.circle_edges);
  const std::vector<Vec2> pos = initial_positions(shape, pc, init, res.packing);
  std::vector<Vec2> v0(pos.size());
  std::vector<double> p0(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    v0[i] = Vec2{pos[i].x1, -pos[i].x2} * cfg.A0;
    p0[i] = 0.5 * fc.rho0 * cfg.A0 * cfg.A0 * (cfg.R0 * cfg.R0 - norm2(pos[i]));
  }
  FluidState s = make_state(pos, v0, p0, fc);

  FluidModel model(shape, fc);  // every edge is packing-only: free surface
  res.dt = stable_dt(fc);
  RunOutcome run = integrate(model, s, res.dt, fc.t_end, cfg.samples, cfg.max_density_error, observer);
  res.steps = run.steps;
  res.series = std::move(run.series);

  res.oracle = drop_oracle(cfg.A0, cfg.R0, fc.t_end).back();
  res.fit = fit_edge_ellipse(s.position, cfg.edge_fraction);
  res.edge_deviation = edge_radial_deviation(s.position, res.oracle.a, res.oracle.b, cfg.edge_fraction);
  res.final = std::move(s);
  return res;
}

}  // namespace bipi
