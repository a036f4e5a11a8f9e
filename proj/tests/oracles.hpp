#pragma once
// Test-side reference computations. Nothing here calls into the library's
// numerical routines except contains(), which the γ oracle needs as its
// region indicator (contains() is itself checked against winding numbers).

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "bipi/geometry.hpp"
#include "bipi/vec2.hpp"

namespace oracle {

using bipi::Vec2;
inline constexpr double pi = std::numbers::pi;

/// Wendland C2 written out independently of the library.
inline double wendland(double r, double h) {
  const double q = r / h;
  if (q >= 2.0) return 0.0;
  const double t = 1.0 - 0.5 * q;
  return 7.0 / (4.0 * pi * h * h) * t * t * t * t * (2.0 * q + 1.0);
}

/// Winding number of p with respect to the closed polygon `loop`, by summing
/// signed turning angles.
inline double winding(std::span<const Vec2> loop, const Vec2& p) {
  double total = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Vec2 u = loop[i] - p;
    const Vec2 v = loop[(i + 1) % loop.size()] - p;
    total += std::atan2(bipi::cross(u, v), bipi::dot(u, v));
  }
  return total / (2.0 * pi);
}

/// Inside the fluid iff the summed winding over all loops is 1 (outer CCW
/// loops count +1, holes -1).
inline bool inside_by_winding(const bipi::BoundarySet& b, const Vec2& p) {
  double w = 0.0;
  for (const auto& l : b.loops) w += winding(l.vertices, p);
  return std::lround(w) == 1;
}

/// All-pairs neighbor list of point p (ids sorted ascending).
inline std::vector<int> brute_neighbors(std::span<const Vec2> x, const Vec2& p, double radius,
                                        int self = -1) {
  std::vector<int> out;
  for (std::size_t b = 0; b < x.size(); ++b) {
    if (static_cast<int>(b) == self) continue;
    if (bipi::norm(p - x[b]) <= radius) out.push_back(static_cast<int>(b));
  }
  return out;
}

/// gamma(x) = ∫ W over the support disk ∩ domain with a polar midpoint grid
/// and a containment test at every node.
inline double gamma_polar(const Vec2& x, const bipi::BoundarySet& b, double h, int nr = 400,
                          int nt = 720) {
  const double R = 2.0 * h;
  const double dr = R / nr;
  const double dt = 2.0 * pi / nt;
  double sum = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) * dr;
    const double wr = wendland(r, h) * r * dr * dt;
    for (int j = 0; j < nt; ++j) {
      const double t = (j + 0.5) * dt;
      if (bipi::contains(b, {x.x1 + r * std::cos(t), x.x2 + r * std::sin(t)})) sum += wr;
    }
  }
  return sum;
}

/// Straight-wall gamma as an iterated 2D integral over the disk part with
/// y >= -d: midpoint rule across x, composite Simpson along each chord.
inline double gamma_wall_2d(double d, double h, int nx = 4000, int ny = 400) {
  const double R = 2.0 * h;
  const double c = 2.0 * R / nx;
  double sum = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = -R + (i + 0.5) * c;
    const double top = std::sqrt(R * R - x * x);
    const double lo = std::max(-d, -top);
    if (lo >= top) continue;
    const double step = (top - lo) / ny;
    double col = 0.0;
    for (int j = 0; j <= ny; ++j) {
      const double wgt = (j == 0 || j == ny) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      col += wgt * wendland(std::hypot(x, lo + j * step), h);
    }
    sum += col * step / 3.0;
  }
  return sum * c;
}

/// Σ_b W(|x - x_b|) dx² over a square lattice of spacing dx with a node at
/// offset `o` from x, truncated at 2h.
inline double lattice_sum(double dx, double h, Vec2 o = {}) {
  const int n = static_cast<int>(std::ceil(2.0 * h / dx)) + 2;
  double s = 0.0;
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j) s += wendland(std::hypot(i * dx + o.x1, j * dx + o.x2), h);
  return s * dx * dx;
}

/// Central difference.
template <typename F>
double derivative(F&& f, double x, double step) {
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

/// Elliptical drop by classical RK4 in the variables (a, A):
///   da/dt = A a,  dA/dt = -A² (a⁴ - R0⁴) / (a⁴ + R0⁴).
/// Returns {a, b = R0² / a, A} at t.
struct Drop {
  double a, b, A;
};
inline Drop drop_rk4(double A0, double R0, double t, int steps) {
  auto rhs = [R0](double a, double A) {
    const double a4 = a * a * a * a;
    const double r4 = R0 * R0 * R0 * R0;
    return std::pair{A * a, -A * A * (a4 - r4) / (a4 + r4)};
  };
  double a = R0, A = A0;
  const double dt = t / steps;
  for (int k = 0; k < steps; ++k) {
    const auto [k1a, k1A] = rhs(a, A);
    const auto [k2a, k2A] = rhs(a + 0.5 * dt * k1a, A + 0.5 * dt * k1A);
    const auto [k3a, k3A] = rhs(a + 0.5 * dt * k2a, A + 0.5 * dt * k2A);
    const auto [k4a, k4A] = rhs(a + dt * k3a, A + dt * k3A);
    a += dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    A += dt / 6.0 * (k1A + 2.0 * k2A + 2.0 * k3A + k4A);
  }
  return {a, R0 * R0 / a, A};
}

/// Square lattice of spacing dx covering [x0, x1] x [y0, y1] at cell centres.
inline std::vector<Vec2> lattice(double dx, double x0, double x1, double y0, double y1) {
  std::vector<Vec2> p;
  const int nx = static_cast<int>(std::lround((x1 - x0) / dx));
  const int ny = static_cast<int>(std::lround((y1 - y0) / dx));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) p.push_back({x0 + (i + 0.5) * dx, y0 + (j + 0.5) * dx});
  return p;
}

}  // namespace oracle
