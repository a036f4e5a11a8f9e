#pragma once

#include <string_view>
#include <vector>

#include "bipi/geometry.hpp"
#include "bipi/kernel.hpp"
#include "bipi/neighbors.hpp"
#include "bipi/wall.hpp"

namespace bipi {

struct FluidConfig {
  double dx = 0.02;
  double h = 0.04;
  double rho0 = 1000.0;
  double c0 = 10.0;
  double mu = 0.0;
  Vec2 f_ext{0.0, -9.81};
  double p_b = 0.0;
  double delta_diff = 0.1;
  // Diffuse only the departure from hydrostatic stratification under F_ext:
  // each pair difference rho_a - rho_b loses rho F_ext . x_ab / c^2.
  // Off gives the plain Molteni-Colagrossi term; with F_ext = 0 both agree.
  bool diffusion_correction = true;
  double t_end = 1.0;

  [[nodiscard]] KernelSpec kernel() const { return KernelSpec{h}; }
  [[nodiscard]] double mass() const { return rho0 * dx * dx; }
  /// Throws ConfigError on non-positive dx, h, rho0, c0 or negative mu.
  void validate() const;
};

struct FluidState {
  std::vector<Vec2> position;
  std::vector<Vec2> velocity;
  std::vector<double> rho;
  std::vector<double> p;
  double mass = 0.0;
  double t = 0.0;

  [[nodiscard]] std::size_t size() const { return position.size(); }
};

/// Tait equation of state.
double eos(double rho, const FluidConfig& cfg);
/// Inverse of eos(); throws NumericalAbort when no positive density maps to p.
double density_for_pressure(double p, const FluidConfig& cfg);

/// Near-wall compressed density from the particle-centroid distance.
double compressed_density(double rho_a, double dist, double dx);

struct TimeStep {
  double dt = 0.0;
  std::string_view binding;  // "acoustic", "force", "h2" or "viscous"
};

/// Minimum of the four step limits; force and viscous limits are skipped
/// when |F_ext| or mu is zero.
TimeStep stable_dt(const FluidConfig& cfg);

double kinetic_energy(const FluidState& s);

struct RmsErrors {
  double p = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
};
/// Root-mean-square deviation over all particles from reference fields.
RmsErrors rms_errors(const FluidState& s, const std::vector<double>& p_ref,
                     const std::vector<Vec2>& v_ref);

/// Per-particle right-hand-side pieces, all from one neighbor pass.
struct ParticleRates {
  double continuity = 0.0;  // without density diffusion
  double diffusion = 0.0;
  Vec2 pressure;            // -(1/(rho gamma)) (...) pressure part of the momentum rate
  Vec2 laplacian;           // div grad v
};

/// Weakly compressible solver over static walls (segments flagged
/// packing-only are dropped). An empty wall set gives a free-surface run.
class FluidModel {
 public:
  FluidModel(const BoundarySet& boundary, const FluidConfig& cfg);
  FluidModel(const FluidModel&) = delete;
  FluidModel& operator=(const FluidModel&) = delete;

  /// Rebuild the neighbor index and wall samples for the snapshot `s`.
  /// `s` must stay alive and unchanged while rates are queried.
  void update(const FluidState& s);

  [[nodiscard]] ParticleRates rates(int a, const FluidState& s) const;

  [[nodiscard]] double continuity_rate(int a, const FluidState& s) const;
  [[nodiscard]] double density_diffusion(int a, const FluidState& s) const;
  [[nodiscard]] Vec2 momentum_rate(int a, const FluidState& s) const;
  [[nodiscard]] Vec2 viscous_laplacian(int a, const FluidState& s) const;
  /// Wall pressure felt by particle a from segment `seg` (static wall).
  [[nodiscard]] double wall_pressure(int a, int seg, const FluidState& s) const;

  /// One explicit step: rates on the pre-step snapshot, then
  /// rho += dt drho, v += dt dv, x += dt v (updated v), p = eos(rho).
  /// Throws NumericalAbort if any density becomes non-positive.
  void step(FluidState& s, double dt);

  [[nodiscard]] const BoundarySet& walls() const { return walls_; }
  [[nodiscard]] const FluidConfig& config() const { return cfg_; }
  [[nodiscard]] double gamma(int a) const { return wall_[static_cast<std::size_t>(a)].gamma; }
  [[nodiscard]] const WallSample& wall_sample(int a) const { return wall_[static_cast<std::size_t>(a)]; }

 private:
  // Density difference rho_a - rho_b of a fluid at rest under F_ext.
  [[nodiscard]] double hydrostatic_difference(const Vec2& x_ab, double rho_bar) const;

  BoundarySet walls_;
  FluidConfig cfg_;
  KernelSpec spec_;
  WallEvaluator evaluator_;
  NeighborIndex index_;
  std::vector<WallSample> wall_;
  std::vector<double> drho_;
  std::vector<Vec2> dv_;
};

/// Fluid state at rest-or-prescribed velocity from particle positions, with
/// densities from the inverse EOS of the given pressures.
FluidState make_state(const std::vector<Vec2>& positions, const std::vector<Vec2>& velocity,
                      const std::vector<double>& pressure, const FluidConfig& cfg);

}  // namespace bipi
