#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hsl/errors.hpp"
#include "hsl/special.hpp"

using namespace hsl;

TEST_CASE("Gauss-Legendre integrates polynomials up to degree 2n-1") {
  for (int order = 1; order <= 12; ++order) {
    const GaussRule& g = gauss_legendre(order);
    for (int deg = 0; deg < 2 * order; ++deg) {
      double s = 0.0;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("Gauss-Jacobi on [0,1] against beta integrals") {
  // int_0^1 r^j (1-r)^e dr = B(j+1, e+1)
  for (double e : {-0.5, 0.0, 0.3, 1.0, 2.5}) {
    const GaussRule g = gauss_jacobi_unit(8, e);
    for (int j = 0; j < 16; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], j);
      const double exact = std::exp(std::lgamma(j + 1.0) + std::lgamma(e + 1.0) - std::lgamma(j + e + 2.0));
      CHECK(s == doctest::Approx(exact).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(gauss_jacobi(4, -1.0, 0.0), DivergenceError);
}

TEST_CASE("gamma ratios and constants") {
  CHECK(fractional_derivative_factor(1, 3, 1.0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(fractional_derivative_factor(0, 2, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  // t = 1 gives k + n/2
  for (int k = 0; k < 30; ++k)
    for (int n = 2; n <= 3; ++n)
      CHECK(fractional_derivative_factor(k, n, 1.0) == doctest::Approx(k + 0.5 * n).epsilon(1e-12));
  // large arguments go through lgamma
  CHECK(fractional_derivative_factor(200, 3, 1.0) == doctest::Approx(201.5).epsilon(1e-10));
  CHECK(gamma_ratio(5.5, 4.5) == doctest::Approx(4.5).epsilon(1e-14));
  CHECK(sphere_area(2) == doctest::Approx(2 * std::numbers::pi));
  CHECK(sphere_area(3) == doctest::Approx(4 * std::numbers::pi));
  CHECK(poisson_constant(1) == doctest::Approx(1 / std::numbers::pi));
  CHECK(poisson_constant(2) == doctest::Approx(0.5 / std::numbers::pi));
}
