#include "bipi/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace bipi::quad {
namespace {

struct Table {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Table compute(int n) {
  Table t;
  t.nodes.resize(static_cast<std::size_t>(n));
  t.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double wgt = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    t.nodes[lo] = -x;
    t.nodes[hi] = x;
    t.weights[lo] = wgt;
    t.weights[hi] = wgt;
  }
  if (n % 2 == 1) t.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return t;
}

}  // namespace

Rule gauss_legendre(int order) {
  constexpr int kMax = 256;
  if (order < 1 || order > kMax) throw std::invalid_argument("gauss_legendre: order out of range");
  static std::array<Table, kMax + 1> tables;
  static std::array<std::once_flag, kMax + 1> once;
  const auto idx = static_cast<std::size_t>(order);
  std::call_once(once[idx], [&] { tables[idx] = compute(order); });
  return {tables[idx].nodes, tables[idx].weights};
}

}  // namespace bipi::quad
