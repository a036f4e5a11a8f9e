#include "bipi/kernel.hpp"

#include <cmath>

namespace bipi {

double w(double r, const KernelSpec& spec) {
  const double q = r / spec.h;
  if (q >= 2.0) return 0.0;
  const double t = 1.0 - 0.5 * q;
  const double t2 = t * t;
  return spec.alpha() * t2 * t2 * (2.0 * q + 1.0);
}

double dw_dq(double q, const KernelSpec& spec) {
  if (q >= 2.0) return 0.0;
  const double t = 1.0 - 0.5 * q;
  return -5.0 * spec.alpha() * q * t * t * t;
}

Vec2 grad_w(const Vec2& d, const KernelSpec& spec) {
  const double r = norm(d);
  if (r == 0.0) return {};
  const double q = r / spec.h;
  if (q >= 2.0) return {};
  // dW/dq / (h r) folds the 1/r of the unit vector into one factor; the
  // q/r ratio is 1/h, so this stays finite as r -> 0.
  const double t = 1.0 - 0.5 * q;
  const double f = -5.0 * spec.alpha() * t * t * t / (spec.h * spec.h);
  return d * f;
}

double radial_mass(double r, const KernelSpec& spec) {
  double q = r / spec.h;
  if (q > 2.0) q = 2.0;
  const double q2 = q * q;
  // h^2 int_0^q W(s) s ds with W expanded as 1 - 5/2 s^2 + 5/2 s^3 - 15/16 s^4 + 1/8 s^5.
  const double poly =
      q2 * (0.5 + q2 * (-0.625 + q * (0.5 + q * (-5.0 / 32.0 + q / 56.0))));
  return spec.alpha() * spec.h * spec.h * poly;
}

}  // namespace bipi
