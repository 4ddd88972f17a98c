#pragma once

// Harmonic test functions on H, H^m and the ball with exact values and
// exact or finite-difference derivatives.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hsl/halfspace.hpp"
#include "hsl/polynomial.hpp"
#include "hsl/quadrature.hpp"
#include "hsl/spherical.hpp"

namespace hsl {

enum class Domain { Halfspace, Product, Ball };

struct GradientRequest {
  enum class Mode { Exact, FiniteDifference };
  int order = 1;
  Mode mode = Mode::Exact;
  /// Finite-difference step; <= 0 picks 1e-4 times the local scale.
  double step = 0.0;
};

class TestFunction {
public:
  /// P(x, t + s0) on H^n.
  static TestFunction poisson_shift(int n, double s0);
  /// d^l/dt^l |z - theta_bar|^{1-n}; for n = 1 the base is log|z - theta_bar|.
  static TestFunction derivative_kernel(const HPoint& theta, int l);
  /// Seeded random combination of all solid harmonics up to `degree` on the ball.
  static TestFunction harmonic_polynomial_ball(int n, int degree, std::uint64_t index);
  /// r^k Y_j^{(k)} on the ball.
  static TestFunction solid_harmonic(int n, int k, int j);
  /// Synthesis of a coefficient table as a polynomial on the ball.
  static TestFunction from_table(const CoeffTable& table);
  static TestFunction ball_polynomial(int n, Polynomial p, std::string name);
  /// f(z_1, ..., z_m) = prod f_j(z_j), each factor on H.
  static TestFunction product(std::vector<TestFunction> factors);

  TestFunction scaled(double c) const;

  Domain domain() const;
  int n() const;
  int factors() const;
  /// Factor j of a product (j = 0 and *this otherwise).
  const TestFunction& factor(int j) const;
  const std::string& name() const;
  /// Number of coordinates of a point: n + 1 on H, n on the ball.
  int coord_count() const;

  double operator()(const HPoint& z) const;
  double operator()(std::span<const HPoint> zs) const;
  double operator()(const BallPoint& x) const;
  double eval_coords(std::span<const double> c) const;

  bool has_exact_derivatives() const;
  /// D^gamma f at c, gamma over coord_count() coordinates. Exact only.
  double derivative(std::span<const int> gamma, std::span<const double> c) const;
  /// |nabla^N f| = sqrt(sum_{|gamma| = N} |D^gamma f|^2).
  double grad_norm(const GradientRequest& req, std::span<const double> c) const;
  double grad_norm(const GradientRequest& req, const HPoint& z) const;
  double grad_norm(const GradientRequest& req, const BallPoint& x) const;

  /// Length scale at c: distance to the pole (kernel families) or to the
  /// boundary of the ball.
  double local_scale(std::span<const double> c) const;
  /// Fourth-order finite-difference Laplacian with step h.
  double laplacian_fd(std::span<const double> c, double h) const;
  /// |Delta_h f| / (|f| / scale^2) with h = 1e-2 * scale; dimensionless.
  double harmonicity_residual(std::span<const double> c) const;

  struct Impl;

private:
  explicit TestFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Multi-indices gamma with |gamma| = order over `dims` coordinates, in
/// lexicographic order.
std::vector<std::vector<int>> multi_indices(int dims, int order);

/// Parses "poisson_shift:S0", "derivative_kernel:L:X1,...,T",
/// "solid_harmonic:K:J", "harmonic_poly:DEGREE:INDEX" and products joined
/// by '*'. `n` is the dimension for families that do not carry one.
TestFunction parse_test_function(const std::string& text, int n);

}  // namespace hsl
