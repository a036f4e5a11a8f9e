#include <random>

#include "bipi/errors.hpp"
#include "bipi/scenarios.hpp"
#include "bipi/wall.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bipi;

namespace {

// Wall along x2 = 0, long compared with the support, refined to 0.02.
BoundarySet long_box() { return refine_segments(rectangle(4.0, 2.0, {-2.0, 0.0}), 0.02); }

Vec2 sum_terms(const WallSample& s) {
  Vec2 g;
  for (const auto& t : s.terms) g += t.grad_gamma;
  return g;
}

Segment make_segment(Vec2 a, Vec2 b) {
  Segment s;
  s.a = a;
  s.b = b;
  s.length = norm(b - a);
  s.normal = perp_left((b - a) / s.length);
  s.centroid = 0.5 * (a + b);
  return s;
}

}  // namespace

TEST_CASE("grad_gamma_segment basics") {
  const KernelSpec k(0.04);
  const Segment s = make_segment({0, 0}, {0.02, 0});
  CHECK(grad_gamma_segment({0.01, 0.2}, s, k) == Vec2{0, 0});
  const Vec2 g = grad_gamma_segment({0.01, 0.013}, s, k);
  CHECK(g.x2 > 0.0);
  CHECK(std::abs(g.x1) < 1e-12 * norm(g));
  // Below the wall the integrand is the same; the normal does not flip.
  CHECK(grad_gamma_segment({0.005, -0.03}, s, k).x2 >= 0.0);
}

TEST_CASE("grad_gamma_segment: quadrature refinement") {
  const KernelSpec k(0.04);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.09, 0.09);
  const Segment s = make_segment({0.0, 0.0}, {0.017, 0.006});
  for (int i = 0; i < 200; ++i) {
    const Vec2 x{u(rng), u(rng)};
    const Vec2 a = grad_gamma_segment(x, s, k, {.order = 16});
    const Vec2 b = grad_gamma_segment(x, s, k, {.order = 64});
    CHECK(norm(a - b) <= 1e-8 * std::max(norm(b), 1e-12));
  }
}

TEST_CASE("grad_gamma_segment is additive under splitting") {
  const KernelSpec k(0.04);
  const Segment s = make_segment({0.0, 0.0}, {0.019, 0.0});
  const Segment s1 = make_segment({0.0, 0.0}, {0.007, 0.0});
  const Segment s2 = make_segment({0.007, 0.0}, {0.019, 0.0});
  for (const Vec2 x : {Vec2{0.003, 0.01}, Vec2{0.007, 0.001}, Vec2{-0.05, 0.02}, Vec2{0.03, 0.0}}) {
    const Vec2 d = grad_gamma_segment(x, s, k) - grad_gamma_segment(x, s1, k) - grad_gamma_segment(x, s2, k);
    CHECK(norm(d) <= 1e-10 * std::max(1.0, norm(grad_gamma_segment(x, s, k))));
  }
}

TEST_CASE("gamma: far field, straight wall, corner") {
  const KernelSpec k(0.04);
  const auto box = long_box();
  CHECK(gamma({0.0, 1.0}, box, k) == 1.0);
  CHECK(gamma({0.0, 0.0801}, box, k) == 1.0);
  CHECK(gamma({0.0, 0.0}, box, k) == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(gamma({-2.0, 0.0}, box, k) == doctest::Approx(0.25).epsilon(2e-3));
  CHECK_THROWS_AS(gamma({0.0, -0.01}, box, k), GeometryError);
}

TEST_CASE("gamma_halfplane") {
  const KernelSpec k(0.04);
  CHECK(gamma_halfplane(0.0, k) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(gamma_halfplane(0.08, k) == 1.0);
  CHECK(gamma_halfplane(1.0, k) == 1.0);
  double prev = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double g = gamma_halfplane(0.08 * i / 200.0, k);
    CHECK(g >= prev);
    prev = g;
  }
  // freeze reference, k_b = 0.6 dx with h = 2 dx
  CHECK(gamma_halfplane(0.012, k) == doctest::Approx(oracle::gamma_wall_2d(0.012, 0.04)).epsilon(1e-4));
  CHECK(gamma({0.0, 0.012}, long_box(), k) == doctest::Approx(gamma_halfplane(0.012, k)).epsilon(1e-4));
}

TEST_CASE("gamma against the polar containment oracle") {
  const KernelSpec k(0.05);
  const auto t = refine_segments(trapezoid(), 0.025);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 12) {
    const Vec2 x{u(rng), 0.5 * u(rng)};
    if (!contains(t, x) || nearest_boundary(t, x).distance > 0.1) continue;
    CHECK(gamma(x, t, k) == doctest::Approx(oracle::gamma_polar(x, t, 0.05, 400, 2880)).epsilon(1e-3));
    ++checked;
  }
}

TEST_CASE("straight wall: summed boundary gradient equals d(gamma)/dd") {
  const KernelSpec k(0.04);
  const auto box = long_box();
  const WallEvaluator ev(box, k);
  for (int i = 1; i < 40; ++i) {
    const double d = 0.08 * i / 40.0;
    const Vec2 g = sum_terms(ev.evaluate({0.001, d}));
    const double fd = oracle::derivative([&](double s) { return gamma_halfplane(s, k); }, d, 1e-7);
    CHECK(std::abs(g.x2 - fd) <= 1e-3 * std::abs(fd));
    CHECK(std::abs(g.x1) <= 1e-8 * std::abs(g.x2));
  }
}

TEST_CASE("two parallel walls: normal components cancel") {
  const KernelSpec k(0.04);
  const auto channel = refine_segments(rectangle(4.0, 0.1, {-2.0, 0.0}), 0.02);
  const WallEvaluator ev(channel, k);
  const WallSample s = ev.evaluate({0.0, 0.05});
  CHECK(!s.terms.empty());
  const Vec2 g = sum_terms(s);
  CHECK(std::abs(g.x2) < 1e-8);
  CHECK(std::abs(g.x1) < 1e-8);
}

TEST_CASE("WallEvaluator: interior point has no terms and gamma 1") {
  const KernelSpec k(0.04);
  const auto box = long_box();
  const WallEvaluator ev(box, k);
  const WallSample s = ev.evaluate({0.0, 1.0});
  CHECK(s.gamma == 1.0);
  CHECK(s.terms.empty());
  const WallSample n = ev.evaluate({0.0, 0.03});
  CHECK(n.gamma == doctest::Approx(gamma({0.0, 0.03}, box, k)).epsilon(1e-12));
  for (const auto& t : n.terms) CHECK(dot(t.grad_gamma, box.segments[static_cast<std::size_t>(t.segment)].normal) >= 0.0);
}
