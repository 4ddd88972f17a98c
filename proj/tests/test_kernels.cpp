#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hsl/errors.hpp"
#include "hsl/kernels.hpp"
#include "hsl/special.hpp"
#include "hsl/spherical.hpp"

using namespace hsl;

namespace {

const double kPi = std::numbers::pi;

// Oracle 1: Q_k from truncated Taylor jets in u of c_n u (a + u^2)^{-(n+1)/2},
// a = |x - y|^2; the (k+1)-st coefficient times (k+1)! is the derivative.
double q_by_jets(int n, int k, const HPoint& z, const HPoint& w) {
  const double a = horizontal_distance_sq(z, w);
  const double u0 = z.t + w.t;
  const int len = k + 2;
  std::vector<double> g(static_cast<std::size_t>(len), 0.0), h(static_cast<std::size_t>(len), 0.0);
  g[0] = a + u0 * u0;
  if (len > 1) g[1] = 2 * u0;
  if (len > 2) g[2] = 1.0;
  const double alpha = -0.5 * (n + 1);
  h[0] = std::pow(g[0], alpha);
  for (int m = 1; m < len; ++m) {
    double s = 0.0;
    for (int j = 1; j <= m; ++j) s += (alpha * j - (m - j)) * g[static_cast<std::size_t>(j)] * h[static_cast<std::size_t>(m - j)];
    h[static_cast<std::size_t>(m)] = s / (m * g[0]);
  }
  // multiply by u = u0 + e
  const std::size_t top = static_cast<std::size_t>(k + 1);
  const double coef = u0 * h[top] + h[top - 1];
  const double deriv = poisson_constant(n) * coef * std::tgamma(k + 2.0);
  return std::pow(-2.0, k + 1) / std::tgamma(k + 1.0) * deriv;
}

// Oracle 2: central finite difference of order k+1 on P in u.
double q_by_finite_difference(int n, int k, const HPoint& z, const HPoint& w, double step) {
  std::array<double, kMaxDim> v{};
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = z.x[static_cast<std::size_t>(i)] - w.x[static_cast<std::size_t>(i)];
  const double u = z.t + w.t;
  const int order = k + 1;
  double s = 0.0;
  for (int i = 0; i <= order; ++i) {
    const double c = std::tgamma(order + 1.0) / (std::tgamma(i + 1.0) * std::tgamma(order - i + 1.0));
    s += ((i % 2) ? -1.0 : 1.0) * c *
         poisson_h(std::span<const double>(v.data(), static_cast<std::size_t>(n)), u + (0.5 * order - i) * step);
  }
  return std::pow(-2.0, k + 1) / std::tgamma(k + 1.0) * s / std::pow(step, order);
}

BallPoint ball_point(double a, double b, double c = 0.0, int n = 3) {
  BallPoint p;
  p.n = n;
  p.x = {a, b, c};
  return p;
}

BallPoint random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  BallPoint p;
  p.n = n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    p.x[static_cast<std::size_t>(i)] = g(rng);
    s += p.x[static_cast<std::size_t>(i)] * p.x[static_cast<std::size_t>(i)];
  }
  for (auto& c : p.x) c /= std::sqrt(s);
  return p;
}

}  // namespace

TEST_CASE("half-space Poisson kernel") {
  const double x0[] = {0.0, 0.0, 0.0};
  for (int n = 1; n <= 3; ++n)
    CHECK(poisson_h(std::span<const double>(x0, static_cast<std::size_t>(n)), 2.0) ==
          doctest::Approx(poisson_constant(n) * std::pow(2.0, -n)));
  CHECK_THROWS_AS(poisson_h(std::span<const double>(x0, 1), 0.0), DomainError);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2, 2), ut(0.1, 3);
  for (int i = 0; i < 50; ++i) {
    const double x[] = {u(rng), u(rng)};
    const double t = ut(rng);
    const double xs[] = {x[0] / t, x[1] / t};
    CHECK(poisson_h(x, t) == doctest::Approx(std::pow(t, -2) * poisson_h(xs, 1.0)).epsilon(1e-13));
  }
  for (int n = 1; n <= 3; ++n) {
    const double mass = integrate_rn([](std::span<const double> x) { return poisson_h(x, 1.0); }, n, 12, 16);
    CHECK(std::abs(mass - 1.0) < 1e-3);
  }
}

TEST_CASE("Bergman kernel closed form") {
  HalfspaceKernelParams p{1, 0};
  CHECK(bergman_h(p, HPoint(0.0, 0.5), HPoint(0.0, 0.5)) == doctest::Approx(2 / kPi).epsilon(1e-14));
  // z = w = (0, 1): Q_0 = 2 c_1 / u^2 at u = 2
  CHECK(kernel_bound_ratio(p, HPoint(0.0, 1.0), HPoint(0.0, 1.0)) == doctest::Approx(2 / kPi).epsilon(1e-14));
  const HPoint z(0.3, 0.7), w(-1.1, 0.4);
  CHECK(bergman_h(p, z, w) == doctest::Approx(bergman_h(p, HPoint(-1.1, 0.7), HPoint(0.3, 0.4))));

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ux(-2, 2), ut(0.2, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const int k = trial % 4;
    HPoint a, b;
    a.n = b.n = n;
    a.t = ut(rng);
    b.t = ut(rng);
    for (int i = 0; i < n; ++i) {
      a.x[static_cast<std::size_t>(i)] = ux(rng);
      b.x[static_cast<std::size_t>(i)] = ux(rng);
    }
    const double exact = bergman_h({n, k}, a, b);
    CHECK(exact == doctest::Approx(q_by_jets(n, k, a, b)).epsilon(1e-10));
    // second-order stencil: compare against the kernel scale, since Q_k crosses zero
    const double d = reflected_distance(a, b);
    const double scale = std::pow(2.0, k + 1) * (k + 1) * std::pow(d, -(k + n + 1));
    const double fd = q_by_finite_difference(n, k, a, b, 2e-3 * d);
    CHECK(std::abs(exact - fd) <= 1e-4 * scale);
  }
}

TEST_CASE("kernel bound ratio is finite and stable") {
  auto sup = [](int samples) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ux(-4, 4), ue(-6, 6);
    double best = 0.0;
    for (int s = 0; s < samples; ++s) {
      const int n = 1 + s % 3;
      const int k = (s / 3) % 4;
      HPoint a, b;
      a.n = b.n = n;
      a.t = std::exp2(ue(rng));
      b.t = std::exp2(ue(rng));
      for (int i = 0; i < n; ++i) {
        a.x[static_cast<std::size_t>(i)] = ux(rng);
        b.x[static_cast<std::size_t>(i)] = ux(rng);
      }
      const double r = kernel_bound_ratio({n, k}, a, b);
      CHECK(r >= 0.0);
      best = std::max(best, r);
    }
    return best;
  };
  const double a = sup(10000), b = sup(20000);
  CHECK(std::isfinite(b));
  CHECK(std::abs(b - a) <= 0.1 * a);
}

TEST_CASE("ball Poisson kernel") {
  CHECK(poisson_ball(ball_point(0, 0, 0), ball_point(0, 0, 1)) == doctest::Approx(1 / (4 * kPi)));
  CHECK_THROWS_AS(poisson_ball(ball_point(1, 0, 0), ball_point(0, 0, 1)), DomainError);
  const BallPoint x = ball_point(0.3, -0.2, 0.3464);
  CHECK(integrate_sphere([&](const BallPoint& y) { return poisson_ball(x, y); }, {3, 64, 32}) ==
        doctest::Approx(1.0).epsilon(1e-10));

  // series in the orthonormal basis
  std::mt19937_64 rng(9);
  for (int n = 2; n <= 3; ++n) {
    SphericalBasis basis(n, 40);
    for (double r : {0.5, 0.7}) {
      for (int trial = 0; trial < 5; ++trial) {
        const BallPoint xp = random_unit(rng, n), yp = random_unit(rng, n);
        BallPoint x = xp;
        for (auto& c : x.x) c *= r;
        double series = 0.0;
        for (int k = 0; k <= 40; ++k)
          for (int j = 1; j <= basis.dim(k); ++j) series += std::pow(r, k) * basis.eval(k, j, yp) * basis.eval(k, j, xp);
        // geometric tail beyond K = 40
        double tail = 0.0;
        for (int k = 41; k < 400; ++k) tail += std::pow(r, k) * harmonic_dim(n, k) / sphere_area(n);
        const double err = std::abs(series - poisson_ball(x, yp));
        CHECK(err <= tail);
        if (r <= 0.5) CHECK(err < 1e-6);
      }
    }
  }
}

TEST_CASE("ball Bergman kernel") {
  BallKernelParams p{3, 0.0, 40, 1e-8};
  // k = 0 term only: 2 Gamma(5/2) / (Gamma(1) Gamma(3/2)) * Y_0^2 = 3 / (4 pi)
  CHECK(bergman_ball(p, ball_point(0, 0, 0), ball_point(0, 0, 0)).value == doctest::Approx(3 / (4 * kPi)));
  CHECK_THROWS_AS(bergman_ball(p, ball_point(0.99, 0, 0), ball_point(0.99, 0, 0)), TruncationError);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 20; ++i) {
    const BallPoint a = ball_point(u(rng), u(rng), u(rng)), b = ball_point(u(rng), u(rng), u(rng));
    CHECK(bergman_ball(p, a, b).value == doctest::Approx(bergman_ball(p, b, a).value).epsilon(1e-13));
  }

  // reproducing property for a degree-2 harmonic polynomial
  auto h = [](const BallPoint& y) {
    const double last = y.x[static_cast<std::size_t>(y.n - 1)];
    return 1.0 + y.x[0] - 0.5 * last + y.x[0] * y.x[1] + y.x[0] * y.x[0] - last * last;
  };
  for (double m : {0.0, 1.0}) {
    for (int n = 2; n <= 3; ++n) {
      BallKernelParams q{n, m, 60, 1e-6};
      const BallPoint x = ball_point(0.2, -0.1, n == 3 ? 0.15 : 0.0, n);
      const double v = integrate_ball(
          [&](const BallPoint& y) { return h(y) * bergman_ball(q, x, y).value; }, 16,
          {n, 24, 12}, m);
      CHECK(std::abs(v - h(x)) < 1e-3);
    }
  }
}
