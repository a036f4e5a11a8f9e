#include <random>

#include "bipi/drop.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bipi;

TEST_CASE("drop oracle: rest state and area conservation") {
  for (const auto& st : drop_oracle(0.0, 1.0, 2.0, 100)) {
    CHECK(st.a == 1.0);
    CHECK(st.b == 1.0);
  }
  const auto traj = drop_oracle(1.0, 1.0, 2.0);
  CHECK(traj.front().a == 1.0);
  CHECK(traj.front().b == 1.0);
  for (const auto& st : traj) CHECK(std::abs(st.a * st.b - 1.0) <= 1e-12);
  const auto scaled = drop_oracle(0.7, 2.5, 3.0);
  for (const auto& st : scaled) CHECK(std::abs(st.a * st.b / 6.25 - 1.0) <= 1e-12);
}

TEST_CASE("drop oracle: three independent routes agree") {
  for (double A0 : {0.5, 1.0, 2.0}) {
    const double T = 2.0 / A0;
    const DropState lib = drop_oracle(A0, 1.0, T).back();
    const DropState energy = drop_oracle_energy(A0, 1.0, T);
    const auto rk = oracle::drop_rk4(A0, 1.0, T, 40000);
    CHECK(lib.a == doctest::Approx(energy.a).epsilon(1e-8));
    CHECK(lib.a == doctest::Approx(rk.a).epsilon(1e-8));
    CHECK(lib.A == doctest::Approx(rk.A).epsilon(1e-8));
  }
}

TEST_CASE("drop oracle: step halving converges") {
  const auto coarse = drop_oracle(1.0, 1.0, 2.0, 4000).back();
  const auto fine = drop_oracle(1.0, 1.0, 2.0, 8000).back();
  CHECK(std::abs(coarse.a - fine.a) < 1e-10);
}

TEST_CASE("drop oracle: regression at A0 t = 2") {
  // Re-derived with the (a, A) integrator in oracles.hpp.
  const auto st = drop_oracle(1.0, 1.0, 2.0).back();
  const auto rk = oracle::drop_rk4(1.0, 1.0, 2.0, 40000);
  CHECK(st.a / st.b == doctest::Approx(rk.a / rk.b).epsilon(1e-9));
  CHECK(st.a / st.b > 2.0);
}

TEST_CASE("ellipse fit recovers a filled ellipse") {
  std::vector<Vec2> x;
  const double a = 1.8, b = 1.0 / 1.8, dx = 0.02;
  for (double u = -2.0; u <= 2.0; u += dx)
    for (double v = -1.0; v <= 1.0; v += dx)
      if (u * u / (a * a) + v * v / (b * b) <= 1.0) x.push_back({u + 0.3, v - 0.1});
  const auto f = fit_edge_ellipse(x, 0.1);
  CHECK(f.center.x1 == doctest::Approx(0.3).epsilon(0.01));
  CHECK(f.a == doctest::Approx(a).epsilon(0.02));
  CHECK(f.b == doctest::Approx(b).epsilon(0.04));
  CHECK(f.n_used > 0);
}

TEST_CASE("edge deviation") {
  std::vector<Vec2> ring;
  for (int i = 0; i < 360; ++i) {
    const double t = 2.0 * oracle::pi * i / 360.0;
    ring.push_back({1.1 * std::cos(t), 1.1 * std::sin(t)});
  }
  CHECK(edge_radial_deviation(ring, 1.0, 1.0, 1.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(edge_radial_deviation(ring, 1.1, 1.1, 1.0) < 1e-12);
}
