#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hsl/errors.hpp"
#include "hsl/kernels.hpp"
#include "hsl/spaces.hpp"
#include "hsl/special.hpp"

using namespace hsl;

namespace {

const double pi = std::numbers::pi;

BallFunction constant(double c) {
  return [c](const BallPoint&) { return c; };
}

}  // namespace

TEST_CASE("A^p_lambda against closed forms") {
  // int_R P(x,u)^3 dx = 3 / (8 pi^2 u^2), then int_0^inf (1+t)^-2 dt = 1
  auto r = norm_bergman_h(TestFunction::poisson_shift(1, 1.0), {3.0, 0.0, {}});
  CHECK(r.status == NormStatus::Ok);
  CHECK(r.value == doctest::Approx(std::cbrt(3.0 / (8.0 * pi * pi))).epsilon(1e-3));
  CHECK(r.error_estimate < 1e-3 * r.value);
  // n = 2: int P^2 dx = 1 / (8 pi u^2)
  auto r2 = norm_bergman_h(TestFunction::poisson_shift(2, 1.0), {2.0, 0.0, {}});
  CHECK(r2.value == doctest::Approx(std::sqrt(1.0 / (8.0 * pi))).epsilon(1e-3));
  CHECK(r2.error_estimate < 1e-3 * r2.value);
}

TEST_CASE("log-divergent A^2_0 norm is reported") {
  auto r = norm_bergman_h(TestFunction::poisson_shift(1, 1.0), {2.0, 0.0, {}});
  CHECK(r.status == NormStatus::NotInSpace);
}

TEST_CASE("A^p_lambda homogeneity and zero") {
  HalfspaceQuadSpec s = HalfspaceQuadSpec::coarse();
  auto f = TestFunction::poisson_shift(1, 1.0);
  auto a = norm_bergman_h(f, {3.0, 0.0, {}}, s);
  auto b = norm_bergman_h(f.scaled(2.0), {3.0, 0.0, {}}, s);
  CHECK(b.value == doctest::Approx(2.0 * a.value).epsilon(1e-13));
  CHECK(norm_bergman_h(f.scaled(0.0), {3.0, 0.0, {}}, s).value == 0.0);
  CHECK_THROWS_AS(norm_bergman_h(f, {2.0, -1.0, {}}, s), ParameterError);
}

TEST_CASE("product norm against the separable oracle") {
  const HalfspaceQuadSpec s = HalfspaceQuadSpec::coarse();
  auto g = TestFunction::poisson_shift(1, 1.0);
  auto h = TestFunction::poisson_shift(1, 2.0);
  auto f = TestFunction::product({g, h});
  BergmanNormParams p{3.0, 0.0, {0.0, 0.0}};
  auto nested = norm_product_h(f, p, s);
  std::vector<HalfspaceFunction> parts = {[&](const HPoint& z) { return std::pow(std::abs(g(z)), 3.0); },
                                          [&](const HPoint& z) { return std::pow(std::abs(h(z)), 3.0); }};
  std::vector<WeightSpec> w = {WeightSpec{0.0}, WeightSpec{0.0}};
  const double sep = std::cbrt(integrate_product_separable(parts, 1, w, s).value);
  CHECK(nested.value == doctest::Approx(sep).epsilon(1e-3));

  BergmanNormParams one{3.0, 0.0, {0.0}};
  CHECK(norm_product_h(g, one, s).value == doctest::Approx(norm_bergman_h(g, {3.0, 0.0, {}}, s).value).epsilon(1e-14));
}

TEST_CASE("M_p on the sphere") {
  SphereQuadSpec sp{3, 32, 16};
  CHECK(mp_radial(constant(1.0), 2.0, 0.3, sp) == doctest::Approx(std::sqrt(4.0 * pi)).epsilon(1e-12));
  for (int k = 0; k <= 4; ++k)
    for (int j = 1; j <= harmonic_dim(3, k); ++j) {
      auto f = ball_function(TestFunction::solid_harmonic(3, k, j));
      CHECK(mp_radial(f, 2.0, 0.6, sp) == doctest::Approx(std::pow(0.6, k)).epsilon(1e-10));
    }
  SphereQuadSpec fine{3, 64, 32};
  const BallPoint y0{3, {0.0, 0.6, 0.8}};
  auto pb = [&](const BallPoint& x) { return poisson_ball(x, y0); };
  CHECK(mp_radial(pb, 1.0, 0.5, fine) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mp_radial(constant(-3.0), std::numeric_limits<double>::infinity(), 0.5, sp) == 3.0);
}

TEST_CASE("mixed norm closed form and A^p = B^{p,p}") {
  SphereQuadSpec sp{3, 32, 16};
  auto r = norm_mixed(constant(1.0), {2.0, 2.0, 1.0, 3}, 16, sp);
  CHECK(r.value == doctest::Approx(std::sqrt(4.0 * pi * 2.0 / 15.0)).epsilon(1e-12));
  auto g = norm_mixed(constant(-2.5), {2.0, 2.0, 1.0, 3}, 16, sp);
  CHECK(g.value == doctest::Approx(2.5 * r.value).epsilon(1e-13));

  // weight (1 - r^2)^alpha with alpha = 1, p = 2
  for (auto [k, j] : std::vector<std::pair<int, int>>{{0, 1}, {2, 3}, {3, 5}}) {
    auto f = ball_function(TestFunction::solid_harmonic(3, k, j));
    const double mixed = norm_mixed(f, {2.0, 2.0, 2.0 / 2.0, 3}, 16, sp).value;
    const double berg = norm_bergman_ball(f, 2.0, 1.0, 16, sp);
    CHECK(mixed == doctest::Approx(berg).epsilon(1e-3));
  }
}

TEST_CASE("Triebel-Lizorkin norm") {
  SphereQuadSpec sp{3, 32, 16};
  const double p = 2.0, q = 3.0, a = 0.75;
  auto r = norm_triebel(constant(1.0), {p, q, a, 3}, 16, sp);
  CHECK(r.value == doctest::Approx(std::pow(std::pow(a * p, -q / p) * 4.0 * pi, 1.0 / q)).epsilon(1e-10));

  auto f = ball_function(TestFunction::harmonic_polynomial_ball(3, 3, 11));
  auto g = [&](const BallPoint& x) { return 1.5 * std::abs(f(x)) + 0.1; };
  CHECK(norm_triebel(f, {p, q, a, 3}, 16, sp).value <= norm_triebel(g, {p, q, a, 3}, 16, sp).value);

  // F^{p,p} vs B^{p,p}: a fixed ratio, recorded only
  const double F = norm_triebel(f, {2.0, 2.0, a, 3}, 16, sp).value;
  const double B = norm_mixed(f, {2.0, 2.0, a, 3}, 16, sp).value;
  MESSAGE("F/B ratio " << F / B);
  CHECK(std::isfinite(F / B));
  CHECK(F / B > 0.0);
}

TEST_CASE("growth faster than the weight allows is reported") {
  SphereQuadSpec sp{3, 16, 8};
  auto blow = [](const BallPoint& x) { return std::pow(1.0 - x.norm(), -1.0); };
  CHECK(norm_mixed(blow, {2.0, 2.0, 0.5, 3}, 32, sp).status == NormStatus::NotInSpace);
}

TEST_CASE("D_N norms") {
  SphereQuadSpec sp{3, 32, 16};
  MixedNormParams mp{2.0, 2.0, 1.0, 3};
  auto c = TestFunction::solid_harmonic(3, 0, 1).scaled(-2.0);
  CHECK(norm_dn(c, 1, mp, GradientRequest::Mode::Exact, 16, sp).value ==
        doctest::Approx(2.0 / std::sqrt(4.0 * pi)).epsilon(1e-14));

  auto lin = TestFunction::solid_harmonic(3, 1, 2);
  GradientRequest gr;
  const double g0 = lin.grad_norm(gr, BallPoint{3, {0.0, 0.0, 0.0}});
  const double one = norm_mixed(constant(1.0), mp, 16, sp).value;
  CHECK(norm_dn(lin, 1, mp, GradientRequest::Mode::Exact, 16, sp).value == doctest::Approx(g0 * one).epsilon(1e-12));

  auto h = TestFunction::harmonic_polynomial_ball(3, 3, 5);
  const double ex = norm_dn(h, 2, mp, GradientRequest::Mode::Exact, 16, sp).value;
  const double fd = norm_dn(h, 2, mp, GradientRequest::Mode::FiniteDifference, 16, sp).value;
  CHECK(std::isfinite(ex));
  CHECK(std::abs(ex - fd) <= 1e-4 * ex);
}

TEST_CASE("H^s_beta functional") {
  SphereQuadSpec sp{3, 32, 16};
  auto grid = radial_grid();
  CHECK(grid.size() == 64);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(0.95));
  CHECK(hs_beta_functional(constant(1.0), 2.0, 1.0, grid, sp) == doctest::Approx(std::sqrt(4.0 * pi)));
  CHECK(hs_beta_functional(constant(-3.0), 2.0, 1.0, grid, sp) == doctest::Approx(3.0 * std::sqrt(4.0 * pi)));

  // Poisson kernel slice: M_2(P(., y'), rho)^2 = (1 - rho^4) / (area (1 - rho^2)^n)
  SphereQuadSpec fine{3, 128, 64};
  const BallPoint y0{3, {0.0, 0.0, 1.0}};
  auto pb = [&](const BallPoint& x) { return poisson_ball(x, y0); };
  for (double rho : {0.3, 0.7, 0.9}) {
    const double exact = std::sqrt((1 - std::pow(rho, 4)) / (4 * pi * std::pow(1 - rho * rho, 3)));
    CHECK(mp_radial(pb, 2.0, rho, SphereQuadSpec{3, 256, 128}) == doctest::Approx(exact).epsilon(1e-6));
  }
  const double a = hs_beta_functional(pb, 2.0, 1.0, radial_grid(64), fine);
  const double b = hs_beta_functional(pb, 2.0, 1.0, radial_grid(128), fine);
  CHECK(std::isfinite(a));
  CHECK(b == doctest::Approx(a).epsilon(1e-3));
}

TEST_CASE("norm properties on random pairs") {
  SphereQuadSpec sp{3, 24, 12};
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 4; ++trial) {
    auto f = ball_function(TestFunction::harmonic_polynomial_ball(3, 3, rng()));
    auto g = ball_function(TestFunction::harmonic_polynomial_ball(3, 2, rng()));
    auto sum = [&](const BallPoint& x) { return f(x) + g(x); };
    for (MixedNormParams mp : {MixedNormParams{1.0, 1.0, 0.5, 3}, MixedNormParams{2.0, 3.0, 1.0, 3}}) {
      const double nf = norm_mixed(f, mp, 16, sp).value, ng = norm_mixed(g, mp, 16, sp).value;
      CHECK(norm_mixed(sum, mp, 16, sp).value <= nf + ng + 1e-8);
      CHECK(norm_triebel(sum, mp, 16, sp).value <=
            norm_triebel(f, mp, 16, sp).value + norm_triebel(g, mp, 16, sp).value + 1e-8);
    }
    // Jensen: M_p <= area^{1/p - 1/q} M_q for p < q
    const double area = 4.0 * pi;
    for (double r : {0.2, 0.8}) {
      const double m1 = mp_radial(f, 1.0, r, sp), m2 = mp_radial(f, 2.0, r, sp), m4 = mp_radial(f, 4.0, r, sp);
      CHECK(m1 <= std::pow(area, 0.5) * m2 * (1 + 1e-12));
      CHECK(m2 <= std::pow(area, 0.25) * m4 * (1 + 1e-12));
    }
  }
}
