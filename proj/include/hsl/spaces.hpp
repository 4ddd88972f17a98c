#pragma once

// Norms on H, H^m and the ball computed by quadrature.

#include <span>
#include <string>
#include <vector>

#include "hsl/quadrature.hpp"
#include "hsl/testfns.hpp"

namespace hsl {

enum class NormStatus { Ok, NotInSpace };

std::string to_string(NormStatus s);

struct NormResult {
  double value = 0.0;
  double error_estimate = 0.0;
  NormStatus status = NormStatus::Ok;
  /// Raw integral (before the root) at each refinement level.
  std::vector<double> levels;
};

struct BergmanNormParams {
  double p = 2.0;
  double lambda = 0.0;
  /// Per-factor exponents on H^m; empty means a single factor with lambda.
  std::vector<double> alphas;

  void validate() const;
};

/// p = infinity is passed as std::numeric_limits<double>::infinity().
struct MixedNormParams {
  double p = 2.0;
  double q = 2.0;
  double alpha = 1.0;
  int n = 3;

  void validate() const;
};

/// (int_H |f|^p t^lambda dz)^{1/p}.
NormResult norm_bergman_h(const TestFunction& f, const BergmanNormParams& params,
                          const HalfspaceQuadSpec& spec = {});

/// (int_{H^m} |f|^p prod t_j^{alpha_j} dz)^{1/p} by nested quadrature.
NormResult norm_product_h(const TestFunction& f, const BergmanNormParams& params,
                          const HalfspaceQuadSpec& spec = HalfspaceQuadSpec::coarse());

/// M_p(f, r) = (int_S |f(r x')|^p dx')^{1/p}; p = inf takes the max over nodes.
double mp_radial(const BallFunction& f, double p, double r, const SphereQuadSpec& sphere);

/// (int_0^1 M_p(f, r)^q (1 - r^2)^{alpha q - 1} r^{n-1} dr)^{1/q}.
NormResult norm_mixed(const BallFunction& f, const MixedNormParams& params, int radial_points,
                      const SphereQuadSpec& sphere);

/// (int_S (int_0^1 |f(r x')|^p (1 - r)^{alpha p - 1} dr)^{q/p} dx')^{1/q}.
NormResult norm_triebel(const BallFunction& f, const MixedNormParams& params, int radial_points,
                        const SphereQuadSpec& sphere);

/// (int_B |f|^p (1 - |x|^2)^alpha dx)^{1/p}.
double norm_bergman_ball(const BallFunction& f, double p, double alpha, int radial_points,
                         const SphereQuadSpec& sphere);

/// |f(0)| + || |nabla^N f| ||_{p,q,alpha}.
NormResult norm_dn(const TestFunction& f, int N, const MixedNormParams& params, GradientRequest::Mode mode,
                   int radial_points, const SphereQuadSpec& sphere);

/// sup over the grid of (1 - rho)^beta M_s(f, rho).
double hs_beta_functional(const BallFunction& f, double s, double beta, std::span<const double> rho_grid,
                          const SphereQuadSpec& sphere);

/// Chebyshev-Lobatto points on [0, rho_max]; dense near both ends.
std::vector<double> radial_grid(int points = 64, double rho_max = 0.95);

BallFunction ball_function(const TestFunction& f);

}  // namespace hsl
