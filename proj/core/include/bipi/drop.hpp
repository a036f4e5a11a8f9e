#pragma once

#include <span>
#include <vector>

#include "bipi/vec2.hpp"

namespace bipi {

/// State of the incompressible elliptical drop with velocity (A x1, -A x2):
/// semi-axes a (along x1) and b, strain rate A.
struct DropState {
  double t = 0.0;
  double a = 0.0;
  double b = 0.0;
  double A = 0.0;
};

/// Classical RK4 on s = ln(a/R0), ds/dt = A, dA/dt = -A^2 tanh(2s), from the
/// Euler equations with the pressure vanishing on the ellipse. b = R0^2 / a.
/// `steps` <= 0 picks a step count fine enough for ~1e-12 accuracy.
std::vector<DropState> drop_oracle(double A0, double R0, double t_end, int steps = 0);

/// Independent route from the first integral A = A0 / sqrt(cosh 2s):
/// t(s) = int_0^s sqrt(cosh 2u) du / A0 by Gauss-Legendre, inverted by bisection.
DropState drop_oracle_energy(double A0, double R0, double t);

/// Axis-aligned ellipse centred at the cloud centroid.
struct EllipseFit {
  Vec2 center;
  double a = 0.0;  // semi-axis along x1
  double b = 0.0;  // semi-axis along x2
  int n_used = 0;
};

/// Least-squares ellipse x^2/a^2 + y^2/b^2 = 1 (about the centroid) through
/// the outermost `fraction` of particles. "Outermost" is ranked by elliptic
/// radius with respect to the current estimate, starting from the moment
/// estimate of a filled ellipse, and the selection is refined a few times.
EllipseFit fit_edge_ellipse(std::span<const Vec2> positions, double fraction = 0.1);

/// Mean |r - r_e(theta)| over the outermost `fraction` of particles, where
/// r_e is the radius of the given origin-centred ellipse along the particle's
/// polar angle.
double edge_radial_deviation(std::span<const Vec2> positions, double a, double b,
                             double fraction = 0.1);

}  // namespace bipi
