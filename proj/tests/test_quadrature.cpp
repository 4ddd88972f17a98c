#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hsl/errors.hpp"
#include "hsl/quadrature.hpp"

using namespace hsl;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("separable Gaussian-exponential integral") {
  auto f = [](const HPoint& z) { return std::exp(-z.t) * std::exp(-z.x[0] * z.x[0]); };
  const QuadResult r = integrate_halfspace(f, 1, {2.0});
  CHECK(std::abs(r.value - 2 * std::sqrt(kPi)) < 1e-4 * 2 * std::sqrt(kPi));
  CHECK(r.levels.size() == 3);
  CHECK(r.error_estimate >= 0.0);
}

TEST_CASE("zero integrand") {
  const QuadResult r = integrate_halfspace([](const HPoint&) { return 0.0; }, 2, {0.0});
  CHECK(r.value == 0.0);
  CHECK(r.error_estimate == 0.0);
}

TEST_CASE("non-finite values and divergence are reported") {
  CHECK_THROWS_AS(integrate_halfspace([](const HPoint& z) { return z.x[0] > 1.0 ? NAN : 1.0; }, 1, {0.0}),
                  EvaluationError);
  // t^{-2} near the boundary: each level halves the floor and the value doubles
  auto f = [](const HPoint& z) { return std::exp(-z.x[0] * z.x[0] - z.t); };
  CHECK_THROWS_AS(integrate_halfspace(f, 1, {-2.5}), DivergenceError);
}

TEST_CASE("linearity at fixed nodes") {
  auto f = [](const HPoint& z) { return std::exp(-z.t - z.x[0] * z.x[0] - z.x[1] * z.x[1]); };
  auto g = [](const HPoint& z) { return 1.0 / std::pow(1 + z.t + z.x[0] * z.x[0] + z.x[1] * z.x[1], 3); };
  HalfspaceQuadSpec s = HalfspaceQuadSpec::coarse();
  const double a = integrate_halfspace_level(f, 2, {1.0}, s);
  const double b = integrate_halfspace_level(g, 2, {1.0}, s);
  const double c = integrate_halfspace_level([&](const HPoint& z) { return 2 * f(z) - 3 * g(z); }, 2, {1.0}, s);
  CHECK(c == doctest::Approx(2 * a - 3 * b).epsilon(1e-13));
}

TEST_CASE("refinement error decreases for smooth separable integrands") {
  auto f = [](const HPoint& z) { return std::exp(-z.t) / (1 + z.x[0] * z.x[0]) / (1 + z.x[1] * z.x[1]); };
  HalfspaceQuadSpec s;
  s.refinement_levels = 3;
  const QuadResult r = integrate_halfspace(f, 2, {0.0}, s);
  const double e1 = std::abs(r.levels[1] - r.levels[0]);
  const double e2 = std::abs(r.levels[2] - r.levels[1]);
  CHECK(e2 <= e1);
  CHECK(r.value == doctest::Approx(kPi * kPi).epsilon(2e-2));
}

TEST_CASE("integral scaling law in s") {
  // int_H t^alpha |z - w_bar|^{-2 gamma} dz scales like s^{alpha + n + 1 - 2 gamma}
  struct Triple {
    double alpha, gamma;
    int n;
  };
  for (Triple tr : {Triple{0.0, 2.0, 1}, Triple{0.5, 2.5, 1}, Triple{0.0, 2.0, 2}}) {
    std::vector<double> logs, vals;
    for (double s : {0.5, 1.0, 2.0, 4.0}) {
      HPoint w;
      w.n = tr.n;
      w.t = s;
      auto f = [&](const HPoint& z) { return std::pow(reflected_distance(z, w), -2 * tr.gamma); };
      HalfspaceQuadSpec spec;
      spec.x_radius = 64;
      spec.t_ceiling = 512;
      const QuadResult r = integrate_halfspace(f, tr.n, {tr.alpha}, spec);
      logs.push_back(std::log(s));
      vals.push_back(std::log(r.value));
    }
    const double expected = tr.alpha + tr.n + 1 - 2 * tr.gamma;
    for (std::size_t i = 1; i < logs.size(); ++i) {
      const double slope = (vals[i] - vals[0]) / (logs[i] - logs[0]);
      CHECK(std::abs(slope - expected) <= 0.05 * std::abs(expected));
    }
  }
}

TEST_CASE("product integration") {
  auto g = [](const HPoint& z) { return std::exp(-z.t - z.x[0] * z.x[0]); };
  auto h = [](const HPoint& z) { return z.t * std::exp(-2 * z.t) / (1 + z.x[0] * z.x[0]); };
  const HalfspaceQuadSpec s = HalfspaceQuadSpec::coarse();
  std::vector<WeightSpec> w2{{0.0}, {1.0}};
  const QuadResult nested = integrate_product_halfspace(
      [&](std::span<const HPoint> z) { return g(z[0]) * h(z[1]); }, 1, w2, s, 2);
  const QuadResult a = integrate_halfspace(g, 1, w2[0], s);
  const QuadResult b = integrate_halfspace(h, 1, w2[1], s);
  CHECK(nested.value == doctest::Approx(a.value * b.value).epsilon(1e-12));

  std::vector<HalfspaceFunction> fs{g, h};
  const QuadResult sep = integrate_product_separable(fs, 1, w2, s);
  CHECK(sep.value == doctest::Approx(a.value * b.value).epsilon(1e-14));

  std::vector<WeightSpec> w1{{0.0}};
  const QuadResult one = integrate_product_halfspace([&](std::span<const HPoint> z) { return g(z[0]); }, 1, w1, s, 1);
  CHECK(one.value == doctest::Approx(a.value).epsilon(1e-14));

  std::vector<WeightSpec> w4(4);
  CHECK_THROWS_AS(integrate_product_halfspace([](std::span<const HPoint>) { return 1.0; }, 1, w4, s, 4),
                  CapacityError);
}

TEST_CASE("box integration and R^n map") {
  Box b;
  b.n = 1;
  b.lo = {0.0, 1.0};
  b.hi = {1.0, 2.0};
  CHECK(integrate_box([](const HPoint&) { return 1.0; }, b, 3, 1, {1.0}) == doctest::Approx(1.5));
  for (int n = 1; n <= 3; ++n) {
    const double v = integrate_rn(
        [n](std::span<const double> x) {
          double r2 = 0.0;
          for (double c : x) r2 += c * c;
          return std::exp(-r2);
        },
        n, 12, 16);
    CHECK(v == doctest::Approx(std::pow(kPi, 0.5 * n)).epsilon(1e-8));
  }
}

TEST_CASE("sphere and ball rules") {
  CHECK(integrate_sphere([](const BallPoint&) { return 1.0; }, {3, 32, 16}) == doctest::Approx(4 * kPi));
  CHECK(integrate_sphere([](const BallPoint&) { return 1.0; }, {2, 32, 16}) == doctest::Approx(2 * kPi));
  // x^2 y^2 z^2 over S^2 = 4 pi / 105
  CHECK(integrate_sphere([](const BallPoint& p) { return p.x[0] * p.x[0] * p.x[1] * p.x[1] * p.x[2] * p.x[2]; },
                         {3, 32, 8}) == doctest::Approx(4 * kPi / 105).epsilon(1e-13));
  CHECK_THROWS_AS(sphere_rule({3, 2, 2}), ParameterError);
  CHECK_THROWS_AS(sphere_rule({4, 8, 2}), DomainError);

  CHECK(integrate_ball([](const BallPoint&) { return 1.0; }, 8, {3, 8, 4}, 0.0) == doctest::Approx(4 * kPi / 3));
  CHECK(integrate_ball([](const BallPoint& p) { return p.norm() * p.norm(); }, 8, {3, 8, 4}, 0.0) ==
        doctest::Approx(4 * kPi / 5));
  // int_B (1-|x|^2) dx over the unit ball in R^3 = 4 pi * 2/15
  CHECK(integrate_ball([](const BallPoint&) { return 1.0; }, 8, {3, 8, 4}, 1.0) ==
        doctest::Approx(4 * kPi * 2.0 / 15.0));
  // steep endpoint weight
  CHECK(integrate_ball([](const BallPoint&) { return 1.0; }, 12, {2, 8, 4}, -0.5) ==
        doctest::Approx(2 * kPi * 1.0).epsilon(1e-10));
  CHECK_THROWS_AS(integrate_ball([](const BallPoint&) { return 1.0; }, 8, {3, 8, 4}, -1.0), DivergenceError);
}
