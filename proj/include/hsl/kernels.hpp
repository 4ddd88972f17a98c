#pragma once

// Poisson and Bergman kernels of the half-space and of the unit ball.

#include <span>

#include "hsl/halfspace.hpp"
#include "hsl/power_form.hpp"
#include "hsl/quadrature.hpp"

namespace hsl {

/// P(x, t) = c_n t / (|x|^2 + t^2)^{(n+1)/2}, n = x.size().
double poisson_h(std::span<const double> x, double t);
/// P at the point z = (x, t).
double poisson_h(const HPoint& z);

struct HalfspaceKernelParams {
  int n = 1;
  int k = 0;

  void validate() const;
};

/// Q_k(z, w) = ((-2)^{k+1} / k!) d^{k+1}/du^{k+1} P(x - y, u) at u = t + s,
/// held as a symbolic form in (v, u) = (x - y, t + s).
class HalfspaceBergman {
public:
  explicit HalfspaceBergman(HalfspaceKernelParams params);

  double operator()(const HPoint& z, const HPoint& w) const;
  const HalfspaceKernelParams& params() const { return params_; }
  const PowerForm& form() const { return form_; }

private:
  HalfspaceKernelParams params_;
  PowerForm form_;
};

/// Q_k(z, w) through a shared cache of kernel forms.
double bergman_h(const HalfspaceKernelParams& params, const HPoint& z, const HPoint& w);

/// |Q_k(z, w)| * |z - w_bar|^{k+n+1}.
double kernel_bound_ratio(const HalfspaceKernelParams& params, const HPoint& z, const HPoint& w);

/// P(x, y') = (1 - |x|^2) / (n omega_n |x - y'|^n) for |x| < 1, |y'| = 1.
double poisson_ball(const BallPoint& x, const BallPoint& yp);

struct BallKernelParams {
  int n = 3;
  double m = 0.0;
  int truncation_degree = 40;
  /// Largest acceptable tail bound.
  double tolerance = 1e-8;

  void validate() const;
};

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

/// Degree-k coefficient 2 Gamma(m+1+k+n/2) / (Gamma(m+1) Gamma(k+n/2)).
double ball_bergman_coefficient(int n, double m, int k);

/// Truncated series for the ball Bergman kernel Q_m(x, y). Throws
/// TruncationError when the geometric tail bound exceeds the tolerance.
SeriesValue bergman_ball(const BallKernelParams& params, const BallPoint& x, const BallPoint& y);

}  // namespace hsl
