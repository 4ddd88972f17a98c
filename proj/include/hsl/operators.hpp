#pragma once

// Integral operators on H and H^m: trace, reproducing formula, S_{a,b},
// the cell operators, R_{a,b}, R_k and the harmonic extension.

#include <span>
#include <string>
#include <vector>

#include "hsl/halfspace.hpp"
#include "hsl/quadrature.hpp"
#include "hsl/testfns.hpp"

namespace hsl {

struct OpResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::vector<double> levels;
  /// "precondition: ..." or "divergent" markers.
  std::vector<std::string> flags;

  bool flagged() const { return !flags.empty(); }
};

struct VecExponents {
  std::vector<double> a;
  std::vector<double> b;

  int m() const { return static_cast<int>(a.size()); }
  void validate() const;
};

/// Tr f(z) = f(z, ..., z).
double trace_eval(const ProductFunction& base, int m, const HPoint& z);
double trace_eval(const TestFunction& f, const HPoint& z);

struct ReproduceParams {
  double p = 2.0;
  double alpha = 0.0;
};

/// True when (p, alpha, k) meet the reproducing-formula hypothesis:
/// k > (alpha+1)/p - 1 for p >= 1, k >= (alpha+n+1)/p - (n+1) for p < 1.
bool reproduce_hypothesis(const ReproduceParams& rp, int n, int k);

/// int_H f(w) Q_k(z, w) s^k dw.
OpResult reproduce(const TestFunction& f, int k, const HPoint& z, const ReproduceParams& rp = {},
                   const HalfspaceQuadSpec& spec = {});

/// prod t_j^{a_j} int_H f(w) s^{-n-1+sum b} / prod |z_j - w_bar|^{a_j+b_j} dw.
OpResult s_expanded(const VecExponents& e, const HalfspaceFunction& f, int n, std::span<const HPoint> zs,
                    const HalfspaceQuadSpec& spec = {});

/// t^a int_{cell} s^b f(w) / |z - w_bar|^{n+1+a+b} dw by tensor Gauss-Legendre.
double s_cell(double a, double b, const WhitneyCell& cell, const HalfspaceFunction& f, const HPoint& z,
              int order = 6, int subdivisions = 1);

/// S~_{a,b} f(z): s_cell on the Whitney cell containing z.
double s_tilde(double a, double b, const HalfspaceFunction& f, const HPoint& z, int order = 6, int subdivisions = 1);

/// s^{-m(n+1)+sum b} int...int g(z_1..z_m) prod t_j^{a_j} / |z_j - w_bar|^{a_j+b_j} dz.
OpResult r_expanded(const VecExponents& e, const ProductFunction& g, int n, const HPoint& w,
                    const HalfspaceQuadSpec& spec = HalfspaceQuadSpec::coarse());

/// int...int g(z_1..z_m) prod Q_k(z_j, w) t_j^k dz.
OpResult r_k(int k, const ProductFunction& g, int n, int m, const HPoint& w,
             const HalfspaceQuadSpec& spec = HalfspaceQuadSpec::coarse());

/// Smallest k with p(n+k+1) > (m-1)(n+1) + m s_j + pn + 1 for all j.
int extension_order(double p, int n, std::span<const double> s);

/// f(z_1..z_m) = int_H Q_k((z_1 + ... + z_m)/m, w) g(w) s^k dw.
OpResult extend(const TestFunction& g, int k, std::span<const HPoint> zs, const HalfspaceQuadSpec& spec = {});

/// Fixed-node version of extend: the rule is built once so repeated calls
/// (finite-difference stencils) see the same discretization.
class Extension {
public:
  Extension(TestFunction g, int k, const HalfspaceQuadSpec& level_spec);
  double operator()(std::span<const HPoint> zs) const;
  /// |Delta_h| in z_j at fixed other points, over |f| / scale^2 with h = 1e-2 * scale.
  double harmonicity_residual(std::span<const HPoint> zs, int j) const;

private:
  TestFunction g_;
  int k_;
  HalfspaceRule rule_;
  std::vector<double> gw_;
};

/// (sum_k prod_i x_{i,k}^p)^{1/p} and prod_i (sum_k x_{i,k}^{q_i})^{1/q_i}.
struct SumLemmaSides {
  double lhs = 0.0;
  double rhs = 0.0;
};
SumLemmaSides elementary_sum(const std::vector<std::vector<double>>& x, double p, std::span<const double> q);

/// C = margin * max(train); pass iff max(eval) <= C.
struct Calibration {
  double train_max = 0.0;
  double eval_max = 0.0;
  double constant = 0.0;
  bool pass = false;
};
Calibration calibrate(std::span<const double> train, std::span<const double> eval, double margin = 1.5);

/// Whitney cells with |layer| <= max_abs_layer meeting |x_i| <= x_radius.
std::vector<WhitneyCell> cell_window(int n, int max_abs_layer, double x_radius);

/// sum_k (int_{D_k} |S~ f|^p V)^{sigma/p} and sum_k (int_{D_k} |f|^p V)^{sigma/p}
/// over the window, V = t^alpha.
struct WindowSums {
  double lhs = 0.0;
  double rhs = 0.0;
};
WindowSums s_tilde_window(double a, double b, double p, double sigma, double alpha, const HalfspaceFunction& f,
                          std::span<const WhitneyCell> window, int order = 4);

/// sum_k eta_k^{n+1} (int_{D_k*} u dm_alpha)^beta and the same over D_k.
struct ComparabilitySums {
  double enlarged = 0.0;
  double plain = 0.0;
};
ComparabilitySums comparability_sums(const HalfspaceFunction& u, double alpha, double beta,
                                     std::span<const WhitneyCell> window, int order = 4);

}  // namespace hsl
