#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "bipi/geometry.hpp"
#include "bipi/kernel.hpp"
#include "bipi/neighbors.hpp"
#include "bipi/particles.hpp"
#include "bipi/wall.hpp"

namespace bipi {

enum class Phase { Step2a, Step2c };
std::string_view to_string(Phase p);

struct PackingConfig {
  double dx = 0.02;
  double h = 0.04;
  double J = 0.5;        // D = J h^2
  double cap = 0.01;     // per-iteration shift limit, 0.5 dx
  double k_a = 0.08;     // packable band in Step 2a, 2h
  double k_b = 0.012;    // freeze reference distance, 0.6 dx
  double tol = 0.01;     // windowed relative change that stops a phase
  int window = 50;
  int min_iters = 200;
  int max_iters_2a = 20000;
  int max_iters_2c = 40000;
  // Off: plain concentration-gradient shifting without the wall step force.
  bool boundary_force = true;

  /// Defaults derived from spacing and h/dx_r.
  static PackingConfig from_resolution(double dx, double h_ratio);

  [[nodiscard]] double diffusion() const { return J * h * h; }
  [[nodiscard]] KernelSpec kernel() const { return KernelSpec{h}; }
  /// Throws ConfigError on inconsistent values.
  void validate() const;
};

struct IterationRecord {
  Phase phase = Phase::Step2a;
  int iter = 0;  // 1-based, counted across both phases
  double tpd_avg = 0.0;
  double gradc_avg = 0.0;
  int n_pack = 0;
  double max_shift = 0.0;  // largest applied |dx| this iteration
  int n_halved = 0;        // shifts shortened by the containment guard
  int n_reverted = 0;      // shifts dropped by the containment guard
};

// ---------------------------------------------------------------------------
// Per-particle operators. `terms` are the wall terms of particle a (segments
// within its support) as produced by WallEvaluator.

/// C_a = sum_b V_b W_ab / gamma_a, self term included.
double concentration(int a, std::span<const Vec2> positions, const NeighborIndex& idx,
                     double volume, double gamma_a, const KernelSpec& spec);

/// grad C_a = (sum_b grad_a W_ab V_b - sum_s grad_gamma_as) / gamma_a.
Vec2 concentration_gradient(int a, std::span<const Vec2> positions, const NeighborIndex& idx,
                            double volume, double gamma_a, std::span<const WallTerm> terms,
                            const KernelSpec& spec);

/// Boundary-corrected gradient of a field with particle values f_b (indexed
/// by particle id) and segment values f_s (aligned with `terms`).
Vec2 corrected_gradient(int a, std::span<const double> f_particles,
                        std::span<const double> f_segments, std::span<const Vec2> positions,
                        const NeighborIndex& idx, double volume, double gamma_a,
                        std::span<const WallTerm> terms, const KernelSpec& spec);

/// Limit |shift| to `cap`, keeping its direction. The result never exceeds cap.
Vec2 cap_shift(const Vec2& shift, double cap);

/// -D grad C, capped.
Vec2 shift_plain(const Vec2& grad_c, const PackingConfig& cfg);

/// 1/2 (p_s/p_a - 1) grad_gamma_as with the step rule p_s = 2 p_a when the
/// normal distance to the segment centroid is below 0.5 dx, else p_s = p_a.
Vec2 boundary_force_term(const Vec2& x_a, const Segment& s, const Vec2& grad_gamma_as, double dx);

/// -D [grad C - (1/gamma) sum_s 1/2 (p_s/p_a - 1) grad_gamma_as], capped.
Vec2 shift_forced(const Vec2& x_a, const Vec2& grad_c, double gamma_a,
                  std::span<const WallTerm> terms, const BoundarySet& b, const PackingConfig& cfg);

/// Freeze threshold: gamma of a point at distance k_b from a straight wall.
double freeze_threshold(const PackingConfig& cfg);

/// frozen := gamma_a < freeze_threshold; frozen particles lose `packable`.
/// Recomputes gamma for every particle. Returns the number frozen.
int freeze_layer(ParticleSet& p, const WallEvaluator& wall, const PackingConfig& cfg);

/// Mean |x - seed| over `ids`. Throws std::invalid_argument on an empty set.
double tpd_avg(const ParticleSet& p, std::span<const int> ids);
/// Mean |grad C| over `ids` using the stored grad_c.
double gradc_avg(const ParticleSet& p, std::span<const int> ids);

/// Stopping rule: after min_iters, at every multiple of `window`, compare the
/// means of the last two non-overlapping windows.
bool window_converged(std::span<const double> series, int window, int min_iters, double tol);

// ---------------------------------------------------------------------------

using IterationObserver = std::function<void(const IterationRecord&, const ParticleSet&)>;

/// Stateful driver for the packing phases over a (refined) packing boundary.
class Packer {
 public:
  Packer(const BoundarySet& boundary, const PackingConfig& cfg, ParticleSet particles);

  /// Classify packable (<= k_a) and selected (<= k_a + 2h) particles.
  void begin_step_2a();
  /// Freeze the boundary-adjacent layer.
  int freeze();
  /// Every unfrozen particle becomes packable; every particle is selected.
  void begin_step_2c();

  /// One synchronized shifting pass over the current packable set.
  IterationRecord iterate(Phase phase);

  /// Recompute gamma, C and grad C for every particle (for output).
  void evaluate_fields();

  [[nodiscard]] const ParticleSet& particles() const { return particles_; }
  [[nodiscard]] const std::vector<int>& packable_ids() const { return packable_; }
  [[nodiscard]] const std::vector<int>& selected_ids() const { return selected_; }
  [[nodiscard]] const std::vector<IterationRecord>& history() const { return history_; }
  [[nodiscard]] const PackingConfig& config() const { return cfg_; }
  [[nodiscard]] const WallEvaluator& wall() const { return wall_; }

 private:
  const BoundarySet* boundary_;
  PackingConfig cfg_;
  KernelSpec spec_;
  WallEvaluator wall_;
  ParticleSet particles_;
  std::vector<int> packable_;
  std::vector<int> selected_;
  std::vector<IterationRecord> history_;

  // scratch
  std::vector<Vec2> shifts_;
  std::vector<double> nearest_;
  WallSample sample_;
};

struct PackResult {
  BoundarySet boundary;  // refined packing boundary
  ParticleSet seeds;
  ParticleSet particles;
  std::vector<IterationRecord> history;
  int iters_2a = 0;
  int iters_2c = 0;
  bool converged_2a = false;
  bool converged_2c = false;
  int n_frozen = 0;
  double freeze_gamma = 0.0;
};

/// Full pipeline: refine boundary, seed, Step 2a until TPD_avg settles,
/// freeze, Step 2c until |grad C|_avg settles.
PackResult run_bipi(const BoundarySet& geometry, const PackingConfig& cfg,
                    const IterationObserver& observer = {});

}  // namespace bipi
