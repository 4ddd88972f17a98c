#pragma once

// Quadrature rules and the handful of special functions the kernels need.

#include <vector>

namespace hsl {

/// Nodes and weights of a one-dimensional rule.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1]. Rules are cached; the reference stays valid.
const GaussRule& gauss_legendre(int order);

/// Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta,
/// alpha, beta > -1 (Golub-Welsch).
GaussRule gauss_jacobi(int order, double alpha, double beta);

/// Rule on [0, 1] for the weight (1-r)^exponent: sum w_i g(r_i) ~ int_0^1 g(r)(1-r)^e dr.
GaussRule gauss_jacobi_unit(int order, double exponent);

/// Gamma(a) / Gamma(b) for a, b > 0.
double gamma_ratio(double a, double b);

/// Gamma(k + n/2 + t) / (Gamma(k + n/2) Gamma(t)), the degree-k factor of
/// the fractional derivative of order t.
double fractional_derivative_factor(int k, int n, double t);

/// Surface area of the unit sphere in R^n (n * omega_n).
double sphere_area(int n);

/// c_n = Gamma((n+1)/2) / pi^{(n+1)/2}, so that the half-space Poisson kernel
/// has unit mass.
double poisson_constant(int n);

}  // namespace hsl
