#pragma once

#include <cmath>
#include <span>

#include "bipi/vec2.hpp"

namespace bipi::quad {

/// Gauss-Legendre rule on [-1, 1]. Tables are computed once per order
/// (Newton on P_n) and cached; orders up to 256 are supported.
struct Rule {
  std::span<const double> nodes;
  std::span<const double> weights;
};
Rule gauss_legendre(int order);

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Vec2& v) { return std::max(std::abs(v.x1), std::abs(v.x2)); }

template <typename F>
auto fixed(F&& f, double a, double b, int order) {
  const Rule rule = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  decltype(f(a)) sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += f(mid + half * rule.nodes[i]) * rule.weights[i];
  }
  return sum * half;
}

struct AdaptiveOptions {
  int order = 16;
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_depth = 48;
};

namespace detail {
template <typename F, typename T>
T adaptive(F& f, double a, double b, const T& whole, const AdaptiveOptions& opt, int depth) {
  const double mid = 0.5 * (a + b);
  const T left = fixed(f, a, mid, opt.order);
  const T right = fixed(f, mid, b, opt.order);
  const T refined = left + right;
  const double err = magnitude(refined - whole);
  if (depth >= opt.max_depth || err <= std::max(opt.abs_tol, opt.rel_tol * magnitude(refined))) {
    return refined;
  }
  // Split the tolerance budget so the total stays bounded.
  AdaptiveOptions sub = opt;
  sub.abs_tol *= 0.5;
  return adaptive(f, a, mid, left, sub, depth + 1) + adaptive(f, mid, b, right, sub, depth + 1);
}
}  // namespace detail

/// Adaptive bisection driven by comparing an order-n Gauss-Legendre sum on an
/// interval with the sum over its two halves.
template <typename F>
auto adaptive(F&& f, double a, double b, const AdaptiveOptions& opt = {}) {
  using T = decltype(f(a));
  if (a == b) return T{};
  const T whole = fixed(f, a, b, opt.order);
  return detail::adaptive(f, a, b, whole, opt, 0);
}

}  // namespace bipi::quad
