#include "bipi/drop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bipi/quadrature.hpp"

namespace bipi {

std::vector<DropState> drop_oracle(double A0, double R0, double t_end, int steps) {
  if (!(R0 > 0.0)) throw std::invalid_argument("drop_oracle: R0 must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("drop_oracle: t_end must be non-negative");
  if (steps <= 0) steps = std::max(1, static_cast<int>(std::ceil(t_end * std::max(1.0, std::abs(A0)) * 2000.0)));
  const double dt = t_end / steps;

  auto rhs = [](double s, double A) { return std::pair{A, -A * A * std::tanh(2.0 * s)}; };
  auto make = [&](double t, double s, double A) {
    const double a = R0 * std::exp(s);
    return DropState{t, a, R0 * std::exp(-s), A};
  };

  std::vector<DropState> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  double s = 0.0;
  double A = A0;
  out.push_back(make(0.0, s, A));
  for (int i = 0; i < steps; ++i) {
    const auto [k1s, k1A] = rhs(s, A);
    const auto [k2s, k2A] = rhs(s + 0.5 * dt * k1s, A + 0.5 * dt * k1A);
    const auto [k3s, k3A] = rhs(s + 0.5 * dt * k2s, A + 0.5 * dt * k2A);
    const auto [k4s, k4A] = rhs(s + dt * k3s, A + dt * k3A);
    s += dt / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
    A += dt / 6.0 * (k1A + 2.0 * k2A + 2.0 * k3A + k4A);
    out.push_back(make(dt * (i + 1), s, A));
  }
  return out;
}

DropState drop_oracle_energy(double A0, double R0, double t) {
  if (A0 == 0.0 || t == 0.0) return {t, R0, R0, A0};
  const double sign = A0 > 0.0 ? 1.0 : -1.0;
  const double A0m = std::abs(A0);
  auto time_of = [&](double s) {
    constexpr int panels = 32;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      acc += quad::fixed([](double u) { return std::sqrt(std::cosh(2.0 * u)); }, s * p / panels,
                         s * (p + 1) / panels, 24);
    }
    return acc / A0m;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (time_of(hi) < t) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (time_of(mid) < t ? lo : hi) = mid;
  }
  const double s = sign * 0.5 * (lo + hi);
  return {t, R0 * std::exp(s), R0 * std::exp(-s), A0 / std::sqrt(std::cosh(2.0 * s))};
}

namespace {

Vec2 centroid(std::span<const Vec2> p) {
  Vec2 c;
  for (const auto& x : p) c += x;
  return c / static_cast<double>(p.size());
}

// Indices of the `count` largest values of key, ties broken by index.
std::vector<std::size_t> top_by(const std::vector<double>& key, std::size_t count) {
  std::vector<std::size_t> idx(key.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return key[i] > key[j]; });
  idx.resize(count);
  return idx;
}

std::size_t edge_count(std::size_t n, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("edge fraction must lie in (0, 1]");
  return std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))));
}

}  // namespace

EllipseFit fit_edge_ellipse(std::span<const Vec2> positions, double fraction) {
  if (positions.size() < 3) throw std::invalid_argument("fit_edge_ellipse: need at least 3 points");
  EllipseFit fit;
  fit.center = centroid(positions);
  // Filled ellipse: <x^2> = a^2 / 4.
  double sxx = 0.0;
  double syy = 0.0;
  for (const auto& p : positions) {
    const Vec2 d = p - fit.center;
    sxx += d.x1 * d.x1;
    syy += d.x2 * d.x2;
  }
  const auto n = static_cast<double>(positions.size());
  fit.a = 2.0 * std::sqrt(sxx / n);
  fit.b = 2.0 * std::sqrt(syy / n);

  const std::size_t count = std::min(positions.size(), edge_count(positions.size(), fraction));
  std::vector<double> key(positions.size());
  for (int pass = 0; pass < 4; ++pass) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
      const Vec2 d = positions[i] - fit.center;
      key[i] = d.x1 * d.x1 / (fit.a * fit.a) + d.x2 * d.x2 / (fit.b * fit.b);
    }
    // Minimise sum (u X + v Y - 1)^2 with X = x^2, Y = y^2.
    double sXX = 0.0, sXY = 0.0, sYY = 0.0, sX = 0.0, sY = 0.0;
    for (std::size_t i : top_by(key, count)) {
      const Vec2 d = positions[i] - fit.center;
      const double X = d.x1 * d.x1;
      const double Y = d.x2 * d.x2;
      sXX += X * X;
      sXY += X * Y;
      sYY += Y * Y;
      sX += X;
      sY += Y;
    }
    const double det = sXX * sYY - sXY * sXY;
    if (!(std::abs(det) > 0.0)) break;
    const double u = (sX * sYY - sY * sXY) / det;
    const double v = (sY * sXX - sX * sXY) / det;
    if (!(u > 0.0) || !(v > 0.0)) break;
    fit.a = 1.0 / std::sqrt(u);
    fit.b = 1.0 / std::sqrt(v);
  }
  fit.n_used = static_cast<int>(count);
  return fit;
}

double edge_radial_deviation(std::span<const Vec2> positions, double a, double b, double fraction) {
  if (positions.empty()) throw std::invalid_argument("edge_radial_deviation: no particles");
  std::vector<double> key(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Vec2& p = positions[i];
    key[i] = p.x1 * p.x1 / (a * a) + p.x2 * p.x2 / (b * b);
  }
  const std::size_t count = std::min(positions.size(), edge_count(positions.size(), fraction));
  double acc = 0.0;
  for (std::size_t i : top_by(key, count)) {
    const Vec2& p = positions[i];
    const double r = norm(p);
    const double c = r > 0.0 ? p.x1 / r : 1.0;
    const double s = r > 0.0 ? p.x2 / r : 0.0;
    const double re = a * b / std::sqrt(b * b * c * c + a * a * s * s);
    acc += std::abs(r - re);
  }
  return acc / static_cast<double>(count);
}

}  // namespace bipi
