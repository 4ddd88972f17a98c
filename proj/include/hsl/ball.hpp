#pragma once

// Harmonic functions on the unit ball through their spherical-harmonic
// coefficients: expansion, synthesis, convolution, fractional derivatives
// and the multiplier functionals.

#include <optional>
#include <vector>

#include "hsl/polynomial.hpp"
#include "hsl/quadrature.hpp"
#include "hsl/spaces.hpp"
#include "hsl/spherical.hpp"

namespace hsl {

/// Sphere rule exact for products of harmonics up to degree `max_degree`
/// with some room for aliasing (at least 32 polar points).
SphereQuadSpec expansion_sphere_spec(int n, int max_degree);

/// b_k^j = r^{-k} int_S f(r x') Y_j^{(k)}(x') dx' at r = r_probe.
CoeffTable expand(const BallFunction& f, int n, int max_degree = 24, double r_probe = 0.5,
                  const std::optional<SphereQuadSpec>& sphere = std::nullopt);

/// sum_k |x|^k sum_j b_k^j Y_j^{(k)}(x/|x|).
double synth(const CoeffTable& table, const BallPoint& x);

/// Table padded with zeros (or cut) to the given degree cap.
CoeffTable resized(const CoeffTable& table, int max_degree);

/// c * f: entrywise product. ShapeError on mismatched shapes.
CoeffTable convolve(const MultiplierSeq& c, const CoeffTable& f);
/// f * g: entrywise product of two coefficient tables.
CoeffTable convolve(const CoeffTable& f, const CoeffTable& g);

/// Degree-k block times Gamma(k+n/2+t) / (Gamma(k+n/2) Gamma(t)).
CoeffTable lambda_t(double t, const CoeffTable& f);

/// The harmonic function whose coefficients are c.
CoeffTable g_of_c(const MultiplierSeq& c);

struct FunctionalResult {
  double value = 0.0;
  double rho = 0.0;
  BallPoint y;
};

/// sup over rho in the grid and y' in the y-rule nodes of
/// (1-rho)^e ||Lambda_{m+1}(g * P_{x'})(rho y')||_{L^s(dx')}. s may be +inf.
FunctionalResult multiplier_functional(const CoeffTable& g, double s, double m, double exponent_shift,
                                       const std::vector<double>& rho_grid, const SphereQuadSpec& x_spec,
                                       const SphereQuadSpec& y_spec);

/// Parameters shared by the four functionals.
struct MultiplierParams {
  double m = 1.0;
  int N = 1;
  double alpha = 0.5;
  double beta = 2.5;
  std::vector<double> rho_grid = radial_grid(64, 0.95);
  SphereQuadSpec x_spec{3, 32, 16};
  SphereQuadSpec y_spec{3, 16, 8};
};

double exponent_l(const MultiplierParams& p);  // m+1+N+beta-alpha
double exponent_k(const MultiplierParams& p);  // m+N+beta-alpha
double exponent_n(const MultiplierParams& p);  // beta-alpha+m+N+1

FunctionalResult functional_l(const CoeffTable& g, double s, const MultiplierParams& p);
FunctionalResult functional_k(const CoeffTable& g, double s, const MultiplierParams& p);
FunctionalResult functional_n(const CoeffTable& g, double s, const MultiplierParams& p);
FunctionalResult functional_n1(const CoeffTable& g, const MultiplierParams& p);

/// Components D^gamma P over all ordered index tuples of length N (n^N of them).
std::vector<Polynomial> gradient_tensor(const Polynomial& p, int n, int N);

struct IdentitySides {
  std::vector<double> lhs;
  std::vector<double> rhs;
  double lhs_norm = 0.0;
  double rhs_norm = 0.0;
  double max_abs_difference = 0.0;
};

/// Left: (c * grad^N f)(r^2 x') from exact coefficients.
/// Right: 2 int_0^1 int_S Lambda_{m+1}(g * P_xi)(rR x') grad^N f(rR xi) (1-R^2)^m R^{n-1} dxi dR
/// by quadrature. N <= 2, otherwise UnsupportedError.
IdentitySides verify_convolution_identity(const CoeffTable& g, const CoeffTable& f, int N, double m, double r,
                                          const BallPoint& x_prime, const SphereQuadSpec& sphere_spec,
                                          int radial_points);

/// M_1(grad^N h, r): sphere mean of the Frobenius norm of the N-th derivative tensor.
double mean_gradient_norm(const CoeffTable& h, int N, double r, const SphereQuadSpec& sphere_spec);

}  // namespace hsl
