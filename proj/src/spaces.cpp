#include "hsl/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hsl/errors.hpp"
#include "hsl/parallel.hpp"
#include "hsl/special.hpp"

namespace hsl {

namespace {

// Level increments that do not decay mean the truncated domain keeps adding
// mass (typically a log divergence the 2x rule misses).
bool stalls(const std::vector<double>& lv) {
  if (lv.size() < 3) return false;
  const std::size_t L = lv.size() - 1;
  const double d1 = lv[L - 1] - lv[L - 2];
  const double d2 = lv[L] - lv[L - 1];
  if (!(d1 > 0.0 && d2 > 0.0)) return false;
  return d2 > 0.8 * d1 && d2 > 1e-3 * std::abs(lv[L]);
}

NormResult rooted(const QuadResult& q, double p) {
  NormResult r;
  r.levels = q.levels;
  if (q.value <= 0.0) return r;
  r.value = std::pow(q.value, 1.0 / p);
  r.error_estimate = r.value * q.error_estimate / (p * q.value);
  if (stalls(q.levels)) r.status = NormStatus::NotInSpace;
  return r;
}

NormResult not_in_space(const DivergenceError& e, double p) {
  NormResult r;
  r.status = NormStatus::NotInSpace;
  r.levels = e.levels();
  r.value = r.levels.empty() ? std::numeric_limits<double>::infinity() : std::pow(std::abs(r.levels.back()), 1.0 / p);
  r.error_estimate = std::numeric_limits<double>::infinity();
  return r;
}

double pw(double x, double p) { return std::pow(std::abs(x), p); }

BallPoint scaled_point(const BallPoint& x, double r) {
  BallPoint y = x;
  for (double& c : y.x) c *= r;
  return y;
}

// Runs a ball norm with N and N/2 radial points; a large jump between the
// two means the radial integral does not converge.
template <class F>
NormResult two_rule(F&& at, int radial_points) {
  if (radial_points < 2) throw ParameterError("radial_points must be >= 2");
  NormResult r;
  const double coarse = at(radial_points / 2);
  r.value = at(radial_points);
  r.levels = {coarse, r.value};
  r.error_estimate = std::abs(r.value - coarse);
  if (!std::isfinite(r.value) || r.error_estimate > 0.1 * std::abs(r.value)) r.status = NormStatus::NotInSpace;
  return r;
}

}  // namespace

std::string to_string(NormStatus s) { return s == NormStatus::Ok ? "ok" : "not_in_space"; }

void BergmanNormParams::validate() const {
  if (!(p > 0.0) || std::isinf(p)) throw ParameterError("p must lie in (0, inf)");
  if (alphas.empty() && !(lambda > -1.0)) throw ParameterError("lambda must be > -1");
  for (double a : alphas)
    if (!(a > -1.0)) throw ParameterError("each alpha_j must be > -1");
}

void MixedNormParams::validate() const {
  if (!(p > 0.0)) throw ParameterError("p must be > 0");
  if (!(q > 0.0) || std::isinf(q)) throw ParameterError("q must lie in (0, inf)");
  if (!(alpha > 0.0)) throw ParameterError("alpha must be > 0");
  if (n != 2 && n != 3) throw DomainError("ball dimension must be 2 or 3");
}

NormResult norm_bergman_h(const TestFunction& f, const BergmanNormParams& params, const HalfspaceQuadSpec& spec) {
  params.validate();
  if (f.domain() != Domain::Halfspace) throw DomainError(f.name() + " is not a function on H");
  const double p = params.p;
  const double lambda = params.alphas.empty() ? params.lambda : params.alphas.front();
  try {
    auto q = integrate_halfspace([&](const HPoint& z) { return pw(f(z), p); }, f.n(), WeightSpec{lambda}, spec);
    return rooted(q, p);
  } catch (const DivergenceError& e) {
    return not_in_space(e, p);
  }
}

NormResult norm_product_h(const TestFunction& f, const BergmanNormParams& params, const HalfspaceQuadSpec& spec) {
  params.validate();
  const int m = f.factors();
  std::vector<WeightSpec> w;
  for (double a : params.alphas) w.push_back(WeightSpec{a});
  if (w.empty()) w.assign(static_cast<std::size_t>(m), WeightSpec{params.lambda});
  if (static_cast<int>(w.size()) != m) throw ParameterError("need one alpha_j per factor");
  if (f.domain() == Domain::Halfspace) {
    BergmanNormParams one = params;
    one.alphas = {w[0].lambda};
    return norm_bergman_h(f, one, spec);
  }
  if (f.domain() != Domain::Product) throw DomainError(f.name() + " is not a function on H^m");
  const double p = params.p;
  try {
    auto q = integrate_product_halfspace([&](std::span<const HPoint> zs) { return pw(f(zs), p); }, f.n(), w, spec, m);
    return rooted(q, p);
  } catch (const DivergenceError& e) {
    return not_in_space(e, p);
  }
}

double mp_radial(const BallFunction& f, double p, double r, const SphereQuadSpec& sphere) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("radius must lie in [0, 1)");
  if (!(p > 0.0)) throw ParameterError("p must be > 0");
  const SphereRule rule = sphere_rule(sphere);
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& x : rule.points) m = std::max(m, std::abs(f(scaled_point(x, r))));
    return m;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < rule.points.size(); ++i) s += rule.weights[i] * pw(f(scaled_point(rule.points[i], r)), p);
  return std::pow(s, 1.0 / p);
}

NormResult norm_mixed(const BallFunction& f, const MixedNormParams& params, int radial_points,
                      const SphereQuadSpec& sphere) {
  params.validate();
  const double e = params.alpha * params.q - 1.0;
  auto at = [&](int N) {
    const GaussRule g = gauss_jacobi_unit(N, e);
    const double s = ordered_sum(g.nodes.size(), [&](std::size_t i) {
      const double r = g.nodes[i];
      return g.weights[i] * pw(mp_radial(f, params.p, r, sphere), params.q) * std::pow(1.0 + r, e) *
             std::pow(r, params.n - 1);
    });
    return std::pow(s, 1.0 / params.q);
  };
  return two_rule(at, radial_points);
}

NormResult norm_triebel(const BallFunction& f, const MixedNormParams& params, int radial_points,
                        const SphereQuadSpec& sphere) {
  params.validate();
  if (std::isinf(params.p)) throw UnsupportedError("Triebel-Lizorkin norm needs finite p");
  const double p = params.p, q = params.q;
  const SphereRule rule = sphere_rule(sphere);
  auto at = [&](int N) {
    const GaussRule g = gauss_jacobi_unit(N, params.alpha * p - 1.0);
    const double s = ordered_sum(rule.points.size(), [&](std::size_t i) {
      double inner = 0.0;
      for (std::size_t k = 0; k < g.nodes.size(); ++k) inner += g.weights[k] * pw(f(scaled_point(rule.points[i], g.nodes[k])), p);
      return rule.weights[i] * std::pow(inner, q / p);
    });
    return std::pow(s, 1.0 / q);
  };
  return two_rule(at, radial_points);
}

double norm_bergman_ball(const BallFunction& f, double p, double alpha, int radial_points, const SphereQuadSpec& sphere) {
  if (!(p > 0.0)) throw ParameterError("p must be > 0");
  return std::pow(integrate_ball([&](const BallPoint& x) { return pw(f(x), p); }, radial_points, sphere, alpha), 1.0 / p);
}

NormResult norm_dn(const TestFunction& f, int N, const MixedNormParams& params, GradientRequest::Mode mode,
                   int radial_points, const SphereQuadSpec& sphere) {
  if (f.domain() != Domain::Ball) throw DomainError(f.name() + " is not a function on the ball");
  if (N < 1) throw ParameterError("N must be >= 1");
  if (mode == GradientRequest::Mode::Exact && !f.has_exact_derivatives())
    throw UnsupportedError("exact gradients are not available for " + f.name());
  GradientRequest req;
  req.order = N;
  req.mode = mode;
  NormResult r = norm_mixed([&](const BallPoint& x) { return f.grad_norm(req, x); }, params, radial_points, sphere);
  const std::array<double, 3> zero{};
  const double f0 = std::abs(f.eval_coords(std::span<const double>(zero.data(), static_cast<std::size_t>(f.n()))));
  r.value += f0;
  for (double& v : r.levels) v += f0;
  return r;
}

double hs_beta_functional(const BallFunction& f, double s, double beta, std::span<const double> rho_grid,
                          const SphereQuadSpec& sphere) {
  double best = 0.0;
  for (double rho : rho_grid) best = std::max(best, std::pow(1.0 - rho, beta) * mp_radial(f, s, rho, sphere));
  return best;
}

std::vector<double> radial_grid(int points, double rho_max) {
  if (points < 2) throw ParameterError("radial grid needs at least 2 points");
  if (!(rho_max > 0.0 && rho_max < 1.0)) throw ParameterError("rho_max must lie in (0, 1)");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] = 0.5 * rho_max * (1.0 - std::cos(std::numbers::pi * i / (points - 1)));
  return g;
}

BallFunction ball_function(const TestFunction& f) {
  if (f.domain() != Domain::Ball) throw DomainError(f.name() + " is not a function on the ball");
  const int n = f.n();
  return [f, n](const BallPoint& x) { return f.eval_coords(std::span<const double>(x.x.data(), static_cast<std::size_t>(n))); };
}

}  // namespace hsl
