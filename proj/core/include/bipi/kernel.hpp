#pragma once

#include <numbers>

#include "bipi/vec2.hpp"

namespace bipi {

/// 2D Wendland C2 ("quintic") kernel,
///   W(q) = alpha (1 - q/2)^4 (2q + 1),  q = r/h in [0, 2],  alpha = 7 / (4 pi h^2).
/// The support ratio kappa is fixed at 2.
struct KernelSpec {
  static constexpr double kappa = 2.0;

  double h = 1.0;

  explicit constexpr KernelSpec(double smoothing_length) : h(smoothing_length) {}

  [[nodiscard]] constexpr double support() const { return kappa * h; }
  [[nodiscard]] constexpr double alpha() const { return 7.0 / (4.0 * std::numbers::pi * h * h); }
};

/// Kernel value W(r) in 1/m^2.
double w(double r, const KernelSpec& spec);

/// dW/dq (still carrying alpha); zero outside the support.
double dw_dq(double q, const KernelSpec& spec);

/// grad_a W_ab for displacement d = x_a - x_b, in 1/m^3. Zero at d = 0.
Vec2 grad_w(const Vec2& d, const KernelSpec& spec);

/// Radial mass M(r) = int_0^r W(s) s ds; 2 pi M(2h) = 1.
double radial_mass(double r, const KernelSpec& spec);

}  // namespace bipi
