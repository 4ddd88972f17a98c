#pragma once

// Weighted integration over truncations of H and H^m, over the sphere S^{n-1}
// and over the ball B.

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "hsl/halfspace.hpp"

namespace hsl {

using HalfspaceFunction = std::function<double(const HPoint&)>;
using ProductFunction = std::function<double(std::span<const HPoint>)>;

/// Point of the unit ball (or of the sphere) in R^n, n in {2, 3}.
struct BallPoint {
  int n = 3;
  std::array<double, 3> x{};

  double norm() const;
};

using BallFunction = std::function<double(const BallPoint&)>;

/// Discretization of int_H over the box |x_i| <= R, t in [t_floor, t_ceiling].
///
/// Panels follow the Whitney layers in t. In x each layer is split into
/// Whitney-width panels on the core |x_i| <= core_radius (never narrower than
/// x_panel_floor) and geometrically growing panels out to R. Each refinement
/// level divides t_floor and multiplies R and t_ceiling by 2^level_growth_log2
/// and raises the order by one.
struct HalfspaceQuadSpec {
  double x_radius = 1024.0;
  double t_floor = 1.0 / 256.0;
  double t_ceiling = 4096.0;
  int points_per_cell_axis = 4;
  int refinement_levels = 3;
  double core_radius = 4.0;
  int level_growth_log2 = 2;
  /// Narrowest x-panel; <= 0 picks 2^-8, 2^-3, 2^-1 for n = 1, 2, 3.
  double x_panel_floor = 0.0;

  void validate() const;
  /// Spec of refinement level `level` (0-based).
  HalfspaceQuadSpec at_level(int level) const;
  double panel_floor(int n) const;

  /// Cheap preset for nested (product) integration.
  static HalfspaceQuadSpec coarse();
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  /// Value at each refinement level, coarsest first.
  std::vector<double> levels;
};

/// int_H f(z) t^lambda dz. Throws EvaluationError on a non-finite node value
/// and DivergenceError when every refinement grows the value by more than 2x.
QuadResult integrate_halfspace(const HalfspaceFunction& f, int n, WeightSpec w,
                               const HalfspaceQuadSpec& spec = {});

/// Single-level variant used by the refinement driver and by callers that
/// already pick one level.
double integrate_halfspace_level(const HalfspaceFunction& f, int n, WeightSpec w,
                                 const HalfspaceQuadSpec& level_spec);

/// Materialized node set of one refinement level (weights include t^lambda).
struct HalfspaceRule {
  std::vector<HPoint> points;
  std::vector<double> weights;
};

HalfspaceRule build_halfspace_rule(int n, WeightSpec w, const HalfspaceQuadSpec& level_spec);

/// int_{H^m} f(z_1..z_m) prod t_j^{lambda_j} dz by nested per-factor rules.
/// m <= 3 (CapacityError otherwise). Cost grows like (nodes per factor)^m, so
/// pass a coarse spec.
QuadResult integrate_product_halfspace(const ProductFunction& f, int n, std::span<const WeightSpec> weights,
                                       const HalfspaceQuadSpec& spec, int m);

/// Separable integrand f = f_1 (x) ... (x) f_m: product of per-factor
/// integrals, error propagated as the sum of per-factor contributions.
QuadResult integrate_product_separable(std::span<const HalfspaceFunction> factors, int n,
                                       std::span<const WeightSpec> weights, const HalfspaceQuadSpec& spec);

/// Tensor Gauss-Legendre over an axis-parallel box in H, each axis split into
/// `subdivisions` panels: int_box f(z) t^lambda dz.
double integrate_box(const HalfspaceFunction& f, const Box& box, int order, int subdivisions = 1,
                     WeightSpec w = {});

/// int_{R^n} g(x) dx in polar form with the radial map r = u / (1 - u).
double integrate_rn(const std::function<double(std::span<const double>)>& g, int n, int order = 12,
                    int panels = 16);

struct SphereQuadSpec {
  int n = 3;
  int azimuthal_points = 32;
  int polar_points = 16;

  void validate() const;
};

/// Nodes on S^{n-1} and weights for the unnormalized surface measure.
struct SphereRule {
  int n = 3;
  std::vector<BallPoint> points;
  std::vector<double> weights;
};

/// Trapezoid on the circle (n = 2); Gauss-Legendre in cos(polar) times
/// trapezoid in azimuth (n = 3).
SphereRule sphere_rule(const SphereQuadSpec& spec);

double integrate_sphere(const BallFunction& g, const SphereQuadSpec& spec);

/// int_B g(x) (1 - |x|^2)^e dx with Gauss-Jacobi nodes for (1 - r)^e in r.
double integrate_ball(const BallFunction& g, int radial_points, const SphereQuadSpec& sphere_spec,
                      double radial_weight_exponent);

}  // namespace hsl
