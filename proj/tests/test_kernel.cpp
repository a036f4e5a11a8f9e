#include <random>

#include "bipi/kernel.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bipi;

TEST_CASE("kernel values") {
  const KernelSpec k(1.0);
  CHECK(w(2.5, k) == 0.0);
  CHECK(w(2.0, k) == 0.0);
  CHECK(w(0.0, k) == doctest::Approx(7.0 / (4.0 * oracle::pi)).epsilon(1e-15));
  CHECK(w(0.0, k) == doctest::Approx(0.5570423).epsilon(1e-7));
  for (double r = 0.0; r < 2.2; r += 0.01) CHECK(w(r, k) == doctest::Approx(oracle::wendland(r, 1.0)).epsilon(1e-14));
}

TEST_CASE("kernel normalization by radial quadrature") {
  for (double h : {0.013, 0.04, 1.0, 7.5}) {
    const KernelSpec k(h);
    // composite Simpson on r W(r) over [0, 2h]
    const int n = 20000;
    const double step = 2.0 * h / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double r = i * step;
      const double c = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += c * r * w(r, k);
    }
    const double integral = 2.0 * oracle::pi * s * step / 3.0;
    CHECK(std::abs(integral - 1.0) < 1e-8);
    CHECK(2.0 * oracle::pi * radial_mass(2.0 * h, k) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("grad_w matches finite differences") {
  const KernelSpec k(0.04);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(0.001 * k.h, 1.999 * k.h);
  std::uniform_real_distribution<double> ut(0.0, 2.0 * oracle::pi);
  for (int i = 0; i < 100; ++i) {
    const double r = ur(rng);
    const double t = ut(rng);
    const Vec2 d{r * std::cos(t), r * std::sin(t)};
    const Vec2 g = grad_w(d, k);
    const double step = 1e-6 * k.h;
    const double fd = oracle::derivative([&](double s) { return w(s, k); }, r, step);
    const Vec2 ref = d * (fd / r);
    CHECK(norm(g - ref) <= 1e-6 * norm(ref));
  }
}

TEST_CASE("grad_w edge cases and symmetry") {
  const KernelSpec k(1.0);
  CHECK(grad_w({0, 0}, k) == Vec2{0, 0});
  CHECK(grad_w({2.1, 0}, k) == Vec2{0, 0});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 d{u(rng), u(rng)};
    CHECK(grad_w(d, k) == -grad_w(-d, k));
  }
  for (double q = 0.0; q <= 2.0; q += 0.001) CHECK(dw_dq(q, k) <= 0.0);
}

TEST_CASE("lattice partition of unity") {
  const double h = 1.0;
  const double s = oracle::lattice_sum(h / 2.0, h);
  CHECK(s >= 0.99);
  CHECK(s <= 1.01);
  // Library kernel over the same lattice.
  const KernelSpec k(h);
  double t = 0.0;
  for (int i = -20; i <= 20; ++i)
    for (int j = -20; j <= 20; ++j) t += w(std::hypot(0.5 * i, 0.5 * j), k) * 0.25;
  CHECK(t == doctest::Approx(s).epsilon(1e-13));
}
