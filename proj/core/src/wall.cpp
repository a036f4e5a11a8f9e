#include "bipi/wall.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bipi/errors.hpp"

namespace bipi {
namespace {

constexpr double kInv2Pi = 0.5 * std::numbers::inv_pi;

// Parametrisation of a segment relative to a point x: x' = a + t u,
// signed normal offset sigma = (x - a) . n, foot at t0.
struct Chord {
  double sigma = 0.0;
  double t0 = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool empty = true;
};

Chord clip(const Vec2& x, const Segment& s, double support) {
  Chord c;
  const Vec2 u = (s.b - s.a) / s.length;
  const Vec2 ax = x - s.a;
  c.sigma = dot(ax, s.normal);
  c.t0 = dot(ax, u);
  if (std::abs(c.sigma) >= support) return c;
  const double half = std::sqrt(support * support - c.sigma * c.sigma);
  c.lo = std::max(0.0, c.t0 - half);
  c.hi = std::min(s.length, c.t0 + half);
  c.empty = !(c.lo < c.hi);
  return c;
}

// Integrate f over [lo, hi], splitting at the foot t0 where the integrand
// loses smoothness.
template <typename F>
auto integrate_chord(F&& f, const Chord& c, const quad::AdaptiveOptions& opt) {
  if (c.t0 > c.lo && c.t0 < c.hi) {
    return quad::adaptive(f, c.lo, c.t0, opt) + quad::adaptive(f, c.t0, c.hi, opt);
  }
  return quad::adaptive(f, c.lo, c.hi, opt);
}

// Interior angle of the fluid region seen from a point lying on segment s
// (at its vertex a, its vertex b, or in between).
double interior_angle_on(const BoundarySet& b, int seg, const Vec2& x, double eps) {
  const Segment& s = b.segments[static_cast<std::size_t>(seg)];
  int in = -1;
  int out = -1;
  if (norm(x - s.a) <= eps) {
    in = s.prev;
    out = seg;
  } else if (norm(x - s.b) <= eps) {
    in = seg;
    out = s.next;
  }
  if (in < 0 || out < 0) return std::numbers::pi;
  const Segment& si = b.segments[static_cast<std::size_t>(in)];
  const Segment& so = b.segments[static_cast<std::size_t>(out)];
  const Vec2 di = si.b - si.a;
  const Vec2 dout = so.b - so.a;
  const double turn = std::atan2(cross(di, dout), dot(di, dout));
  return std::numbers::pi - turn;
}

// Joint per-segment integrals for a point x:
//   flux  = -sigma int (1/2pi - M(r)) / r^2 dt   (gamma contribution)
//   wline = int W(r) dt                           (|grad_gamma_as|)
// The gamma contribution follows from the divergence theorem applied to the
// field (M(r) - 1/2pi) r_hat / r, whose divergence is W minus a unit point
// source at x and which vanishes on the support circle.
struct SegmentIntegrals {
  double flux = 0.0;
  double wline = 0.0;
};

SegmentIntegrals segment_integrals(const Vec2& x, const Segment& s, const KernelSpec& spec,
                                   const quad::AdaptiveOptions& opt, double eps) {
  SegmentIntegrals out;
  const Chord c = clip(x, s, spec.support());
  if (c.empty) return out;
  const double s2 = c.sigma * c.sigma;
  const double h = spec.h;
  const bool on_line = std::abs(c.sigma) <= eps;
  // Component 1 is scaled by h so both components are O(1) for the error test.
  auto f = [&](double t) {
    const double dt = t - c.t0;
    const double r2 = s2 + dt * dt;
    const double r = std::sqrt(r2);
    const double flux = on_line ? 0.0 : (kInv2Pi - radial_mass(r, spec)) / r2;
    return Vec2{h * w(r, spec), flux};
  };
  const Vec2 v = integrate_chord(f, c, opt);
  out.wline = v.x1 / h;
  out.flux = on_line ? 0.0 : -c.sigma * v.x2;
  return out;
}

}  // namespace

Vec2 grad_gamma_segment(const Vec2& x, const Segment& s, const KernelSpec& spec,
                        const quad::AdaptiveOptions& opt) {
  const Chord c = clip(x, s, spec.support());
  if (c.empty) return {};
  const double s2 = c.sigma * c.sigma;
  auto f = [&](double t) {
    const double dt = t - c.t0;
    return w(std::sqrt(s2 + dt * dt), spec);
  };
  return s.normal * integrate_chord(f, c, opt);
}

double gamma(const Vec2& x, const BoundarySet& b, const KernelSpec& spec) {
  const double eps = 1e-10 * spec.h;
  const NearestBoundary nb = nearest_boundary(b, x);
  const bool on_boundary = nb.segment >= 0 && nb.distance <= eps;
  if (!on_boundary && !contains(b, x)) {
    throw GeometryError("gamma: point lies outside the fluid domain");
  }
  if (nb.segment < 0 || nb.distance >= spec.support()) return 1.0;

  const quad::AdaptiveOptions opt{};
  double g = on_boundary ? interior_angle_on(b, nb.segment, x, eps) * kInv2Pi : 1.0;
  for (const auto& s : b.segments) g += segment_integrals(x, s, spec, opt, eps).flux;
  return std::min(g, 1.0);
}

double gamma_halfplane(double d, const KernelSpec& spec) {
  if (d < 0.0) d = 0.0;
  const double R = spec.support();
  if (d >= R) return 1.0;
  // Marginal M(y) = int W(sqrt(x^2 + y^2)) dx over the chord at height y.
  auto marginal = [&](double y) {
    const double X = std::sqrt(std::max(0.0, R * R - y * y));
    double m = 0.0;
    constexpr int panels = 4;
    for (int p = 0; p < panels; ++p) {
      const double a = X * p / panels;
      const double bnd = X * (p + 1) / panels;
      m += quad::fixed([&](double xx) { return w(std::sqrt(xx * xx + y * y), spec); }, a, bnd, 48);
    }
    return 2.0 * m;
  };
  constexpr int panels = 16;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = d * p / panels;
    const double bnd = d * (p + 1) / panels;
    acc += quad::fixed(marginal, a, bnd, 32);
  }
  return std::min(0.5 + acc, 1.0);
}

WallEvaluator::WallEvaluator(const BoundarySet& boundary, const KernelSpec& spec,
                             quad::AdaptiveOptions opt)
    : boundary_(&boundary), spec_(spec), opt_(opt), index_(boundary, spec.support()) {}

void WallEvaluator::evaluate(const Vec2& x, WallSample& out) const {
  thread_local std::vector<int> local;
  out.gamma = 1.0;
  out.nearest = std::numeric_limits<double>::infinity();
  out.terms.clear();
  index_.query(x, local);
  if (local.empty()) return;

  const double eps = 1e-10 * spec_.h;
  int nearest_seg = -1;
  for (int s : local) {
    const double d = distance_to_segment(boundary_->segments[static_cast<std::size_t>(s)], x);
    if (d < out.nearest) {
      out.nearest = d;
      nearest_seg = s;
    }
  }
  double g = out.nearest <= eps ? interior_angle_on(*boundary_, nearest_seg, x, eps) * kInv2Pi : 1.0;
  for (int s : local) {
    const Segment& seg = boundary_->segments[static_cast<std::size_t>(s)];
    const SegmentIntegrals si = segment_integrals(x, seg, spec_, opt_, eps);
    g += si.flux;
    if (si.wline != 0.0) out.terms.push_back({s, seg.normal * si.wline});
  }
  out.gamma = std::min(g, 1.0);
}

WallSample WallEvaluator::evaluate(const Vec2& x) const {
  WallSample s;
  evaluate(x, s);
  return s;
}

}  // namespace bipi
