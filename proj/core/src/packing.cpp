#include "bipi/packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bipi/errors.hpp"

namespace bipi {

std::string_view to_string(Phase p) { return p == Phase::Step2a ? "2a" : "2c"; }

PackingConfig PackingConfig::from_resolution(double dx, double h_ratio) {
  PackingConfig c;
  c.dx = dx;
  c.h = h_ratio * dx;
  c.cap = 0.5 * dx;
  c.k_a = KernelSpec::kappa * c.h;
  c.k_b = 0.6 * dx;
  return c;
}

void PackingConfig::validate() const {
  if (!(dx > 0.0)) throw ConfigError("dx must be positive");
  if (!(h > 0.0)) throw ConfigError("h must be positive");
  if (!(J > 0.0)) throw ConfigError("J must be positive");
  if (!(cap > 0.0)) throw ConfigError("shift cap must be positive");
  if (!(k_b > 0.5 * dx)) throw ConfigError("k_b must exceed 0.5 dx");
  if (!(k_a > k_b)) throw ConfigError("k_a must exceed k_b");
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("tol must lie in (0, 1)");
  if (window < 1 || min_iters < 0) throw ConfigError("window must be >= 1 and min_iters >= 0");
  if (max_iters_2a < 0 || max_iters_2c < 0) throw ConfigError("iteration budgets must be >= 0");
}

namespace {

template <typename FP, typename FS>
Vec2 gradient_sum(int a, FP&& f_particle, FS&& f_segment, std::span<const Vec2> positions,
                  const NeighborIndex& idx, double volume, double gamma_a,
                  std::span<const WallTerm> terms, const KernelSpec& spec) {
  Vec2 sum;
  idx.for_each(positions[static_cast<std::size_t>(a)], a, [&](int b, const Vec2& d, double) {
    sum += grad_w(d, spec) * (f_particle(b) * volume);
  });
  Vec2 wall;
  for (std::size_t k = 0; k < terms.size(); ++k) wall += terms[k].grad_gamma * f_segment(k);
  return (sum - wall) / gamma_a;
}

}  // namespace

double concentration(int a, std::span<const Vec2> positions, const NeighborIndex& idx,
                     double volume, double gamma_a, const KernelSpec& spec) {
  double sum = w(0.0, spec) * volume;
  idx.for_each(positions[static_cast<std::size_t>(a)], a,
               [&](int, const Vec2&, double r) { sum += w(r, spec) * volume; });
  return sum / gamma_a;
}

Vec2 concentration_gradient(int a, std::span<const Vec2> positions, const NeighborIndex& idx,
                            double volume, double gamma_a, std::span<const WallTerm> terms,
                            const KernelSpec& spec) {
  return gradient_sum(
      a, [](int) { return 1.0; }, [](std::size_t) { return 1.0; }, positions, idx, volume,
      gamma_a, terms, spec);
}

Vec2 corrected_gradient(int a, std::span<const double> f_particles,
                        std::span<const double> f_segments, std::span<const Vec2> positions,
                        const NeighborIndex& idx, double volume, double gamma_a,
                        std::span<const WallTerm> terms, const KernelSpec& spec) {
  if (f_segments.size() != terms.size()) {
    throw std::invalid_argument("corrected_gradient: one segment value per wall term required");
  }
  return gradient_sum(
      a, [&](int b) { return f_particles[static_cast<std::size_t>(b)]; },
      [&](std::size_t k) { return f_segments[k]; }, positions, idx, volume, gamma_a, terms, spec);
}

Vec2 cap_shift(const Vec2& shift, double cap) {
  const double m = norm(shift);
  if (m < cap) return shift;
  Vec2 out = shift * (cap / m);
  while (norm(out) > cap) out *= 1.0 - std::numeric_limits<double>::epsilon();
  return out;
}

Vec2 shift_plain(const Vec2& grad_c, const PackingConfig& cfg) {
  return cap_shift(grad_c * -cfg.diffusion(), cfg.cap);
}

Vec2 boundary_force_term(const Vec2& x_a, const Segment& s, const Vec2& grad_gamma_as, double dx) {
  const double normal_dist = std::abs(dot(x_a - s.centroid, s.normal));
  // p_s / p_a = 2 inside half a spacing, 1 otherwise.
  return normal_dist < 0.5 * dx ? grad_gamma_as * 0.5 : Vec2{};
}

Vec2 shift_forced(const Vec2& x_a, const Vec2& grad_c, double gamma_a,
                  std::span<const WallTerm> terms, const BoundarySet& b, const PackingConfig& cfg) {
  Vec2 force;
  for (const auto& t : terms) {
    force += boundary_force_term(x_a, b.segments[static_cast<std::size_t>(t.segment)], t.grad_gamma, cfg.dx);
  }
  return cap_shift((grad_c - force / gamma_a) * -cfg.diffusion(), cfg.cap);
}

double freeze_threshold(const PackingConfig& cfg) { return gamma_halfplane(cfg.k_b, cfg.kernel()); }

int freeze_layer(ParticleSet& p, const WallEvaluator& wall, const PackingConfig& cfg) {
  const double threshold = freeze_threshold(cfg);
  WallSample s;
  int n = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    wall.evaluate(p.position[i], s);
    p.gamma[i] = s.gamma;
    if (s.gamma < threshold) {
      p.frozen[i] = 1;
      p.packable[i] = 0;
      ++n;
    }
  }
  return n;
}

double tpd_avg(const ParticleSet& p, std::span<const int> ids) {
  if (ids.empty()) throw std::invalid_argument("tpd_avg: empty packable set");
  double sum = 0.0;
  for (int i : ids) sum += norm(p.position[static_cast<std::size_t>(i)] - p.seed[static_cast<std::size_t>(i)]);
  return sum / static_cast<double>(ids.size());
}

double gradc_avg(const ParticleSet& p, std::span<const int> ids) {
  if (ids.empty()) throw std::invalid_argument("gradc_avg: empty packable set");
  double sum = 0.0;
  for (int i : ids) sum += norm(p.grad_c[static_cast<std::size_t>(i)]);
  return sum / static_cast<double>(ids.size());
}

bool window_converged(std::span<const double> series, int window, int min_iters, double tol) {
  const auto n = static_cast<long>(series.size());
  if (n < min_iters || n < 2L * window || n % window != 0) return false;
  const auto w = static_cast<long>(window);
  const double prev = std::accumulate(series.end() - 2 * w, series.end() - w, 0.0) / static_cast<double>(w);
  const double cur = std::accumulate(series.end() - w, series.end(), 0.0) / static_cast<double>(w);
  if (prev == 0.0) return cur == 0.0;
  return std::abs(cur - prev) / std::abs(prev) < tol;
}

// ---------------------------------------------------------------------------

Packer::Packer(const BoundarySet& boundary, const PackingConfig& cfg, ParticleSet particles)
    : boundary_(&boundary),
      cfg_(cfg),
      spec_(cfg.h),
      wall_(boundary, spec_),
      particles_(std::move(particles)) {
  cfg_.validate();
  particles_.dx = cfg_.dx;
}

void Packer::begin_step_2a() {
  const NearBoundarySelection sel = select_near_boundary(particles_, *boundary_, spec_, cfg_.k_a);
  packable_ = sel.packable;
  selected_ = sel.selected;
  std::fill(particles_.packable.begin(), particles_.packable.end(), 0);
  std::fill(particles_.selected.begin(), particles_.selected.end(), 0);
  for (int i : packable_) particles_.packable[static_cast<std::size_t>(i)] = 1;
  for (int i : selected_) particles_.selected[static_cast<std::size_t>(i)] = 1;
}

int Packer::freeze() { return freeze_layer(particles_, wall_, cfg_); }

void Packer::begin_step_2c() {
  packable_.clear();
  selected_.resize(particles_.size());
  std::iota(selected_.begin(), selected_.end(), 0);
  for (std::size_t i = 0; i < particles_.size(); ++i) {
    particles_.selected[i] = 1;
    particles_.packable[i] = particles_.frozen[i] ? 0 : 1;
    if (!particles_.frozen[i]) packable_.push_back(static_cast<int>(i));
  }
}

IterationRecord Packer::iterate(Phase phase) {
  if (packable_.empty()) throw std::logic_error("Packer::iterate: no packable particles");
  auto& P = particles_;
  const std::span<const Vec2> pos = P.position;
  const NeighborIndex idx = build_index(pos, selected_, spec_);
  const double V = P.volume();

  shifts_.resize(packable_.size());
  nearest_.resize(packable_.size());

  // Shifts from the iteration-start snapshot.
  for (std::size_t k = 0; k < packable_.size(); ++k) {
    const int a = packable_[k];
    const auto ua = static_cast<std::size_t>(a);
    wall_.evaluate(pos[ua], sample_);
    const Vec2 gc = concentration_gradient(a, pos, idx, V, sample_.gamma, sample_.terms, spec_);
    P.gamma[ua] = sample_.gamma;
    P.grad_c[ua] = gc;
    P.conc[ua] = concentration(a, pos, idx, V, sample_.gamma, spec_);
    shifts_[k] = cfg_.boundary_force
                     ? shift_forced(pos[ua], gc, sample_.gamma, sample_.terms, *boundary_, cfg_)
                     : shift_plain(gc, cfg_);
    nearest_[k] = sample_.nearest;
  }

  IterationRecord rec;
  rec.phase = phase;
  rec.iter = static_cast<int>(history_.size()) + 1;
  rec.n_pack = static_cast<int>(packable_.size());

  for (std::size_t k = 0; k < packable_.size(); ++k) {
    const auto ua = static_cast<std::size_t>(packable_[k]);
    Vec2 d = shifts_[k];
    if (d == Vec2{}) continue;
    // A move shorter than the wall distance cannot leave the domain.
    if (nearest_[k] <= norm(d)) {
      int halvings = 0;
      while (!contains(*boundary_, P.position[ua] + d) && halvings < 4) {
        d *= 0.5;
        ++halvings;
      }
      if (!contains(*boundary_, P.position[ua] + d)) {
        d = {};
        ++rec.n_reverted;
      } else if (halvings > 0) {
        ++rec.n_halved;
      }
    }
    P.position[ua] += d;
    rec.max_shift = std::max(rec.max_shift, norm(d));
  }

  rec.tpd_avg = tpd_avg(P, packable_);
  rec.gradc_avg = gradc_avg(P, packable_);
  history_.push_back(rec);
  return rec;
}

void Packer::evaluate_fields() {
  auto& P = particles_;
  const std::span<const Vec2> pos = P.position;
  const NeighborIndex idx = build_index(pos, spec_);
  for (std::size_t i = 0; i < P.size(); ++i) {
    const int a = static_cast<int>(i);
    wall_.evaluate(pos[i], sample_);
    P.gamma[i] = sample_.gamma;
    P.conc[i] = concentration(a, pos, idx, P.volume(), sample_.gamma, spec_);
    P.grad_c[i] = concentration_gradient(a, pos, idx, P.volume(), sample_.gamma, sample_.terms, spec_);
  }
}

PackResult run_bipi(const BoundarySet& geometry, const PackingConfig& cfg,
                    const IterationObserver& observer) {
  cfg.validate();
  PackResult res;
  res.boundary = refine_segments(geometry, cfg.dx);
  res.seeds = seed_grid(res.boundary, cfg.dx);

  Packer packer(res.boundary, cfg, res.seeds);
  std::vector<double> series;

  packer.begin_step_2a();
  if (!packer.packable_ids().empty()) {
    while (res.iters_2a < cfg.max_iters_2a) {
      const IterationRecord rec = packer.iterate(Phase::Step2a);
      ++res.iters_2a;
      series.push_back(rec.tpd_avg);
      if (observer) observer(rec, packer.particles());
      if (window_converged(series, cfg.window, cfg.min_iters, cfg.tol)) {
        res.converged_2a = true;
        break;
      }
    }
  }

  res.freeze_gamma = freeze_threshold(cfg);
  res.n_frozen = packer.freeze();
  packer.begin_step_2c();

  series.clear();
  if (!packer.packable_ids().empty()) {
    while (res.iters_2c < cfg.max_iters_2c) {
      const IterationRecord rec = packer.iterate(Phase::Step2c);
      ++res.iters_2c;
      series.push_back(rec.gradc_avg);
      if (observer) observer(rec, packer.particles());
      if (window_converged(series, cfg.window, cfg.min_iters, cfg.tol)) {
        res.converged_2c = true;
        break;
      }
    }
  }

  packer.evaluate_fields();
  res.particles = packer.particles();
  res.history = packer.history();
  return res;
}

}  // namespace bipi
