#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bipi/drop.hpp"
#include "bipi/geometry.hpp"
#include "bipi/packing.hpp"
#include "bipi/wcsph.hpp"

namespace bipi {

// Geometry builders -------------------------------------------------------

/// Four-sided tank used for the packing study: base 1 m, top 0.55 m wide,
/// 0.5 m tall, with unequal side slopes.
BoundarySet trapezoid();

/// Axis-aligned rectangle [x0, x0 + w] x [y0, y0 + h].
BoundarySet rectangle(double w, double h, Vec2 origin = {});

/// Rectangular tank, width 2.05 m, with a 45 degree isosceles wedge of height
/// sqrt(2)/8 m centred on the floor. The lid at `height` is packing-only.
BoundarySet wedge_tank(double height);

/// Regular polygon approximating a circle; every edge is packing-only.
BoundarySet circle(double radius, int edges, Vec2 center = {});

// Scenario drivers ----------------------------------------------------------

enum class InitMode { Grid, Bipi };
std::string_view to_string(InitMode m);
InitMode parse_init_mode(std::string_view s);

struct TimeSample {
  double t = 0.0;
  double ke = 0.0;
  double max_density_error = 0.0;  // max |rho/rho0 - 1|
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
/// Ordinary least squares y = slope x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

using StepObserver = std::function<void(const FluidState&)>;

struct HydrostaticConfig {
  double dx = 0.02;
  double h_ratio = 2.0;
  double water_depth = 0.5;
  double t_end = 5.0;
  double mu = 10.0;
  double c0 = 0.0;  // 0 = 10 sqrt(g H)
  double p_b = 0.0;
  double gravity = 9.81;
  double delta_diff = 0.1;
  double max_density_error = 0.05;
  int samples = 500;  // time-series points (approximate)
  PackingConfig packing;  // used for InitMode::Bipi
};

struct HydrostaticResult {
  InitMode init = InitMode::Grid;
  FluidConfig fluid;
  TimeStep dt;
  int steps = 0;
  std::vector<TimeSample> series;
  FluidState initial;
  FluidState final;
  LineFit pressure_fit;  // p against depth (H - x2)
  std::optional<PackResult> packing;
};

/// Hydrostatic tank: particles from the raw grid or BIPI over `packing_boundary`
/// (water surface as a packing-only lid), hydrostatic initial pressure, then
/// WCSPH over the wall segments of `flow_boundary` until t_end.
/// Throws NumericalAbort on a density excursion above max_density_error.
HydrostaticResult run_hydrostatic(const BoundarySet& packing_boundary, const BoundarySet& flow_boundary,
                                  const HydrostaticConfig& cfg, InitMode init,
                                  const StepObserver& observer = {});

struct DropConfig {
  double R0 = 1.0;
  double A0 = 1.0;
  double dx = 0.04;
  double h_ratio = 2.0;
  double c0 = 0.0;  // 0 = 10 A0 R0
  double mu = 0.0;
  double delta_diff = 0.1;
  double t_end = 0.0;  // 0 = 2 / A0
  double edge_fraction = 0.1;
  int circle_edges = 256;
  double max_density_error = 0.05;
  int samples = 200;
  PackingConfig packing;
};

struct DropResult {
  InitMode init = InitMode::Grid;
  FluidConfig fluid;
  TimeStep dt;
  int steps = 0;
  std::vector<TimeSample> series;
  FluidState final;
  DropState oracle;
  EllipseFit fit;
  double edge_deviation = 0.0;  // against the oracle ellipse
  std::optional<PackResult> packing;

  [[nodiscard]] double fit_ratio() const { return fit.a / fit.b; }
  [[nodiscard]] double oracle_ratio() const { return oracle.a / oracle.b; }
};

/// Elliptical drop: circle of radius R0 with v = A0 (x1, -x2) and
/// p = rho0 A0^2 / 2 (R0^2 - r^2), free surface, no walls.
DropResult run_drop(const DropConfig& cfg, InitMode init, const StepObserver& observer = {});

}  // namespace bipi
