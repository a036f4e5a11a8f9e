#include "bipi/wcsph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bipi/errors.hpp"

namespace bipi {

void FluidConfig::validate() const {
  if (!(dx > 0.0) || !(h > 0.0)) throw ConfigError("fluid: dx and h must be positive");
  if (!(rho0 > 0.0)) throw ConfigError("fluid: rho0 must be positive");
  if (!(c0 > 0.0)) throw ConfigError("fluid: c0 must be positive");
  if (!(mu >= 0.0)) throw ConfigError("fluid: mu must be non-negative");
  if (!(delta_diff >= 0.0)) throw ConfigError("fluid: delta_diff must be non-negative");
  if (!(t_end >= 0.0)) throw ConfigError("fluid: t_end must be non-negative");
  if (!is_finite(f_ext) || !std::isfinite(p_b)) throw ConfigError("fluid: non-finite F_ext or P_B");
}

double eos(double rho, const FluidConfig& cfg) {
  const double B = cfg.rho0 * cfg.c0 * cfg.c0 / 7.0;
  return B * (std::pow(rho / cfg.rho0, 7) - 1.0) + cfg.p_b;
}

double density_for_pressure(double p, const FluidConfig& cfg) {
  const double B = cfg.rho0 * cfg.c0 * cfg.c0 / 7.0;
  const double ratio = (p - cfg.p_b) / B + 1.0;
  if (!(ratio > 0.0)) throw NumericalAbort("density_for_pressure: pressure below the EOS floor");
  return cfg.rho0 * std::pow(ratio, 1.0 / 7.0);
}

double compressed_density(double rho_a, double dist, double dx) {
  return dist < 0.5 * dx ? 2.0 * rho_a / dx * (dx - dist) : rho_a;
}

TimeStep stable_dt(const FluidConfig& cfg) {
  TimeStep ts{0.25 * cfg.h / cfg.c0, "acoustic"};
  auto consider = [&](double dt, std::string_view name) {
    if (dt < ts.dt) ts = {dt, name};
  };
  const double f = norm(cfg.f_ext);
  if (f > 0.0) consider(0.25 * std::sqrt(cfg.h / f), "force");
  consider(0.125 * cfg.h * cfg.h, "h2");
  if (cfg.mu > 0.0) consider(0.125 * cfg.rho0 * cfg.h * cfg.h / cfg.mu, "viscous");
  return ts;
}

double kinetic_energy(const FluidState& s) {
  double ke = 0.0;
  for (const auto& v : s.velocity) ke += 0.5 * s.mass * norm2(v);
  return ke;
}

RmsErrors rms_errors(const FluidState& s, const std::vector<double>& p_ref,
                     const std::vector<Vec2>& v_ref) {
  if (p_ref.size() != s.size() || v_ref.size() != s.size()) {
    throw std::invalid_argument("rms_errors: reference size mismatch");
  }
  RmsErrors e;
  if (s.size() == 0) return e;
  for (std::size_t i = 0; i < s.size(); ++i) {
    e.p += (s.p[i] - p_ref[i]) * (s.p[i] - p_ref[i]);
    e.v1 += (s.velocity[i].x1 - v_ref[i].x1) * (s.velocity[i].x1 - v_ref[i].x1);
    e.v2 += (s.velocity[i].x2 - v_ref[i].x2) * (s.velocity[i].x2 - v_ref[i].x2);
  }
  const auto n = static_cast<double>(s.size());
  return {std::sqrt(e.p / n), std::sqrt(e.v1 / n), std::sqrt(e.v2 / n)};
}

FluidModel::FluidModel(const BoundarySet& boundary, const FluidConfig& cfg)
    : walls_(boundary.walls_only()), cfg_(cfg), spec_(cfg.h), evaluator_(walls_, spec_) {
  cfg_.validate();
}

void FluidModel::update(const FluidState& s) {
  index_ = build_index(s.position, spec_);
  wall_.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) evaluator_.evaluate(s.position[i], wall_[i]);
}

double FluidModel::hydrostatic_difference(const Vec2& x_ab, double rho_bar) const {
  // dp = rho F . dx and dp = c^2 drho with c^2 = c0^2 (rho/rho0)^6 (Tait).
  const double c2 = cfg_.c0 * cfg_.c0 * std::pow(rho_bar / cfg_.rho0, 6);
  return rho_bar * dot(cfg_.f_ext, x_ab) / c2;
}

double FluidModel::wall_pressure(int a, int seg, const FluidState& s) const {
  const auto ua = static_cast<std::size_t>(a);
  const Segment& sg = walls_.segments[static_cast<std::size_t>(seg)];
  const double rho_t = compressed_density(s.rho[ua], norm(s.position[ua] - sg.centroid), cfg_.dx);
  return eos(rho_t, cfg_) - s.rho[ua] * cfg_.c0 * dot(s.velocity[ua], sg.normal);
}

ParticleRates FluidModel::rates(int a, const FluidState& s) const {
  const auto ua = static_cast<std::size_t>(a);
  const Vec2& xa = s.position[ua];
  const Vec2& va = s.velocity[ua];
  const double rho_a = s.rho[ua];
  const double p_a = s.p[ua];
  const WallSample& ws = wall_[ua];
  const double g = ws.gamma;
  const double eta2 = 0.01 * spec_.h * spec_.h;

  double div = 0.0;   // sum (v_b - v_a) . grad W V_b
  double diff = 0.0;  // sum (rho_a - rho_b - hydrostatic part) (x_ab . grad W) / (r^2 + eta^2) V_b
  Vec2 pres;          // sum (p_a + p_b) grad W V_b
  Vec2 lap;           // sum (x_ab . grad W) / (r^2 + eta^2) (v_a - v_b) V_b
  index_.for_each(xa, a, [&](int b, const Vec2& d, double r) {
    const auto ub = static_cast<std::size_t>(b);
    const Vec2 gw = grad_w(d, spec_);
    const double Vb = s.mass / s.rho[ub];
    const Vec2 vab = va - s.velocity[ub];
    div -= dot(vab, gw) * Vb;
    const double f = dot(d, gw) / (r * r + eta2) * Vb;
    double drho = rho_a - s.rho[ub];
    if (cfg_.diffusion_correction) drho -= hydrostatic_difference(d, 0.5 * (rho_a + s.rho[ub]));
    diff += drho * f;
    pres += gw * ((p_a + s.p[ub]) * Vb);
    lap += vab * f;
  });

  double div_w = 0.0;
  Vec2 pres_w;
  Vec2 lap_w;
  for (const auto& t : ws.terms) {
    const Segment& sg = walls_.segments[static_cast<std::size_t>(t.segment)];
    // Static walls: v_s = 0.
    div_w += dot(-va, t.grad_gamma);
    pres_w += t.grad_gamma * (p_a + wall_pressure(a, t.segment, s));
    const Vec2 xas = xa - sg.centroid;
    // Wall analogue of the particle term; -grad_gamma plays the role of
    // grad W (as in the concentration gradient), which keeps it dissipative.
    lap_w += va * (dot(xas, -t.grad_gamma) / (norm2(xas) + eta2));
  }

  ParticleRates out;
  out.continuity = -rho_a / g * (div - div_w);
  out.diffusion = cfg_.delta_diff * spec_.h * cfg_.c0 * (2.0 / g) * diff;
  out.pressure = (pres - pres_w) * (-1.0 / (rho_a * g));
  out.laplacian = (lap + lap_w) * (2.0 / g);
  return out;
}

double FluidModel::continuity_rate(int a, const FluidState& s) const {
  const ParticleRates r = rates(a, s);
  return r.continuity + r.diffusion;
}

double FluidModel::density_diffusion(int a, const FluidState& s) const { return rates(a, s).diffusion; }

Vec2 FluidModel::viscous_laplacian(int a, const FluidState& s) const { return rates(a, s).laplacian; }

Vec2 FluidModel::momentum_rate(int a, const FluidState& s) const {
  const ParticleRates r = rates(a, s);
  return r.pressure + r.laplacian * (cfg_.mu / s.rho[static_cast<std::size_t>(a)]) + cfg_.f_ext;
}

void FluidModel::step(FluidState& s, double dt) {
  update(s);
  const std::size_t n = s.size();
  drho_.resize(n);
  dv_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ParticleRates r = rates(static_cast<int>(i), s);
    drho_[i] = r.continuity + r.diffusion;
    dv_[i] = r.pressure + r.laplacian * (cfg_.mu / s.rho[i]) + cfg_.f_ext;
  }
  for (std::size_t i = 0; i < n; ++i) {
    s.rho[i] += dt * drho_[i];
    if (!(s.rho[i] > 0.0)) {
      throw NumericalAbort("non-positive density at particle " + std::to_string(i) +
                           " (t = " + std::to_string(s.t) + " s)");
    }
    s.velocity[i] += dv_[i] * dt;
    s.position[i] += s.velocity[i] * dt;
    s.p[i] = eos(s.rho[i], cfg_);
  }
  s.t += dt;
}

FluidState make_state(const std::vector<Vec2>& positions, const std::vector<Vec2>& velocity,
                      const std::vector<double>& pressure, const FluidConfig& cfg) {
  if (velocity.size() != positions.size() || pressure.size() != positions.size()) {
    throw std::invalid_argument("make_state: field size mismatch");
  }
  FluidState s;
  s.position = positions;
  s.velocity = velocity;
  s.mass = cfg.mass();
  s.rho.resize(positions.size());
  s.p.resize(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    s.rho[i] = density_for_pressure(pressure[i], cfg);
    s.p[i] = eos(s.rho[i], cfg);
  }
  return s;
}

}  // namespace bipi
