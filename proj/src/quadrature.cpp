#include "hsl/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hsl/errors.hpp"
#include "hsl/parallel.hpp"
#include "hsl/special.hpp"

namespace hsl {

namespace {

std::atomic<int> g_workers{1};

struct Axis {
  std::vector<double> nodes;
  std::vector<double> weights;
};

void append_panel(Axis& axis, double a, double b, int order) {
  const GaussRule& gl = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    axis.nodes.push_back(mid + half * gl.nodes[i]);
    axis.weights.push_back(half * gl.weights[i]);
  }
}

// Breakpoints of one x-axis: uniform panels of width `width` on the core,
// then panels growing by 2^{1/4} out to R.
std::vector<double> axis_breakpoints(double radius, double core, double width) {
  const double c = std::min(core, radius);
  const double w = std::min(width, c);
  const auto count = static_cast<long>(std::ceil(2.0 * c / w - 1e-9));
  std::vector<double> outer;
  for (double r = c * std::pow(2.0, 0.25); r < radius * (1.0 - 1e-12); r *= std::pow(2.0, 0.25))
    outer.push_back(r);
  if (radius > c) outer.push_back(radius);

  std::vector<double> breaks;
  for (auto it = outer.rbegin(); it != outer.rend(); ++it) breaks.push_back(-*it);
  const double step = 2.0 * c / static_cast<double>(count);
  for (long i = 0; i <= count; ++i) breaks.push_back(-c + step * static_cast<double>(i));
  for (double r : outer) breaks.push_back(r);
  return breaks;
}

Axis axis_rule(const std::vector<double>& breaks, int order) {
  Axis axis;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) append_panel(axis, breaks[i], breaks[i + 1], order);
  return axis;
}

struct Layer {
  Axis x;
  Axis t;  // weights already include t^lambda
};

std::vector<Layer> build_layers(int n, WeightSpec w, const HalfspaceQuadSpec& s) {
  const int k_top = static_cast<int>(std::floor(-std::log2(s.t_ceiling))) + 1;
  const int k_bottom = static_cast<int>(std::ceil(1.0 - std::log2(s.t_floor))) - 1;
  const double floor_width = s.panel_floor(n);
  std::vector<Layer> layers;
  for (int k = k_top; k <= k_bottom; ++k) {
    const double h = std::ldexp(1.0, -k);
    const double ta = std::max(h, s.t_floor);
    const double tb = std::min(2.0 * h, s.t_ceiling);
    if (!(tb > ta)) continue;
    Layer layer;
    append_panel(layer.t, ta, tb, s.points_per_cell_axis);
    for (std::size_t i = 0; i < layer.t.nodes.size(); ++i)
      layer.t.weights[i] *= std::pow(layer.t.nodes[i], w.lambda);
    const double width = std::clamp(h, floor_width, s.core_radius);
    layer.x = axis_rule(axis_breakpoints(s.x_radius, s.core_radius, width), s.points_per_cell_axis);
    layers.push_back(std::move(layer));
  }
  return layers;
}

[[noreturn]] void throw_non_finite(const HPoint& z, double v) {
  std::vector<double> node;
  for (int i = 0; i <= z.n; ++i) node.push_back(z.coord(i));
  throw EvaluationError("non-finite integrand value " + std::to_string(v) + " at quadrature node", node);
}

inline double checked(const HalfspaceFunction& f, const HPoint& z) {
  const double v = f(z);
  if (!std::isfinite(v)) throw_non_finite(z, v);
  return v;
}

void check_growth(const std::vector<double>& levels) {
  if (levels.size() < 2) return;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    if (!(std::abs(levels[i + 1]) > 2.0 * std::abs(levels[i])) || levels[i] == 0.0) return;
  }
  throw DivergenceError("integral grows by more than 2x at every refinement level", levels);
}

}  // namespace

int worker_count() { return g_workers.load(); }
void set_worker_count(int workers) { g_workers.store(std::max(1, workers)); }

double BallPoint::norm() const {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  return std::sqrt(s);
}

void HalfspaceQuadSpec::validate() const {
  if (!(x_radius > 0.0)) throw ParameterError("quad.x_radius must be positive");
  if (!(t_floor > 0.0) || !(t_ceiling > t_floor)) throw ParameterError("need 0 < quad.t_floor < quad.t_ceiling");
  if (points_per_cell_axis < 2) throw ParameterError("quad.order must be >= 2");
  if (refinement_levels < 1) throw ParameterError("quad.levels must be >= 1");
  if (!(core_radius > 0.0)) throw ParameterError("core radius must be positive");
  if (level_growth_log2 < 0 || level_growth_log2 > 4) throw ParameterError("quad.growth must lie in 0..4");
}

HalfspaceQuadSpec HalfspaceQuadSpec::at_level(int level) const {
  HalfspaceQuadSpec s = *this;
  s.t_floor = std::ldexp(t_floor, -level_growth_log2 * level);
  s.x_radius = std::ldexp(x_radius, level_growth_log2 * level);
  s.t_ceiling = std::ldexp(t_ceiling, level_growth_log2 * level);
  s.points_per_cell_axis = points_per_cell_axis + level;
  s.refinement_levels = 1;
  return s;
}

double HalfspaceQuadSpec::panel_floor(int n) const {
  if (x_panel_floor > 0.0) return x_panel_floor;
  switch (n) {
    case 1: return std::ldexp(1.0, -8);
    case 2: return std::ldexp(1.0, -3);
    default: return 0.5;
  }
}

HalfspaceQuadSpec HalfspaceQuadSpec::coarse() {
  HalfspaceQuadSpec s;
  s.x_radius = 128.0;
  s.t_floor = 1.0 / 8.0;
  s.t_ceiling = 512.0;
  s.points_per_cell_axis = 2;
  s.refinement_levels = 2;
  s.core_radius = 2.0;
  s.x_panel_floor = 0.5;
  return s;
}

double integrate_halfspace_level(const HalfspaceFunction& f, int n, WeightSpec w, const HalfspaceQuadSpec& spec) {
  if (n < 1 || n > kMaxDim) throw DomainError("dimension n must be 1, 2 or 3");
  spec.validate();
  const std::vector<Layer> layers = build_layers(n, w, spec);

  std::vector<std::pair<std::size_t, std::size_t>> units;
  for (std::size_t l = 0; l < layers.size(); ++l)
    for (std::size_t i = 0; i < layers[l].x.nodes.size(); ++i) units.emplace_back(l, i);

  return ordered_sum(units.size(), [&](std::size_t u) {
    const Layer& layer = layers[units[u].first];
    const std::size_t i0 = units[u].second;
    const Axis& ax = layer.x;
    const Axis& at = layer.t;
    HPoint z;
    z.n = n;
    z.x[0] = ax.nodes[i0];
    const std::size_t nx = ax.nodes.size();
    double sum = 0.0;
    if (n == 1) {
      for (std::size_t q = 0; q < at.nodes.size(); ++q) {
        z.t = at.nodes[q];
        sum += at.weights[q] * checked(f, z);
      }
    } else if (n == 2) {
      for (std::size_t j = 0; j < nx; ++j) {
        z.x[1] = ax.nodes[j];
        double inner = 0.0;
        for (std::size_t q = 0; q < at.nodes.size(); ++q) {
          z.t = at.nodes[q];
          inner += at.weights[q] * checked(f, z);
        }
        sum += ax.weights[j] * inner;
      }
    } else {
      for (std::size_t j = 0; j < nx; ++j) {
        z.x[1] = ax.nodes[j];
        double mid = 0.0;
        for (std::size_t l = 0; l < nx; ++l) {
          z.x[2] = ax.nodes[l];
          double inner = 0.0;
          for (std::size_t q = 0; q < at.nodes.size(); ++q) {
            z.t = at.nodes[q];
            inner += at.weights[q] * checked(f, z);
          }
          mid += ax.weights[l] * inner;
        }
        sum += ax.weights[j] * mid;
      }
    }
    return ax.weights[i0] * sum;
  });
}

QuadResult integrate_halfspace(const HalfspaceFunction& f, int n, WeightSpec w, const HalfspaceQuadSpec& spec) {
  spec.validate();
  QuadResult r;
  for (int level = 0; level < spec.refinement_levels; ++level)
    r.levels.push_back(integrate_halfspace_level(f, n, w, spec.at_level(level)));
  check_growth(r.levels);
  r.value = r.levels.back();
  r.error_estimate = r.levels.size() > 1 ? std::abs(r.levels.back() - r.levels[r.levels.size() - 2]) : 0.0;
  return r;
}

HalfspaceRule build_halfspace_rule(int n, WeightSpec w, const HalfspaceQuadSpec& spec) {
  if (n < 1 || n > kMaxDim) throw DomainError("dimension n must be 1, 2 or 3");
  spec.validate();
  HalfspaceRule rule;
  for (const Layer& layer : build_layers(n, w, spec)) {
    const std::size_t nx = layer.x.nodes.size();
    std::array<std::size_t, kMaxDim> idx{};
    while (true) {
      double wx = 1.0;
      HPoint z;
      z.n = n;
      for (int a = 0; a < n; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        z.x[ua] = layer.x.nodes[idx[ua]];
        wx *= layer.x.weights[idx[ua]];
      }
      for (std::size_t q = 0; q < layer.t.nodes.size(); ++q) {
        z.t = layer.t.nodes[q];
        rule.points.push_back(z);
        rule.weights.push_back(wx * layer.t.weights[q]);
      }
      int a = n - 1;
      while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == nx) idx[static_cast<std::size_t>(a--)] = 0;
      if (a < 0) break;
    }
  }
  return rule;
}

QuadResult integrate_product_halfspace(const ProductFunction& f, int n, std::span<const WeightSpec> weights,
                                       const HalfspaceQuadSpec& spec, int m) {
  if (m < 1) throw ParameterError("product order m must be >= 1");
  if (m > 3) throw CapacityError("product domains are limited to m <= 3");
  if (static_cast<int>(weights.size()) != m) throw ParameterError("need one weight per factor");
  spec.validate();
  QuadResult r;
  for (int level = 0; level < spec.refinement_levels; ++level) {
    const HalfspaceQuadSpec ls = spec.at_level(level);
    std::vector<HalfspaceRule> rules;
    for (int j = 0; j < m; ++j) rules.push_back(build_halfspace_rule(n, weights[static_cast<std::size_t>(j)], ls));
    const std::size_t outer = rules[0].points.size();
    const double v = ordered_sum(outer, [&](std::size_t i) {
      std::array<HPoint, 3> zs{};
      zs[0] = rules[0].points[i];
      auto call = [&](int used) {
        const double val = f(std::span<const HPoint>(zs.data(), static_cast<std::size_t>(used)));
        if (!std::isfinite(val)) throw_non_finite(zs[static_cast<std::size_t>(used - 1)], val);
        return val;
      };
      double s = 0.0;
      if (m == 1) {
        s = call(1);
      } else {
        for (std::size_t j = 0; j < rules[1].points.size(); ++j) {
          zs[1] = rules[1].points[j];
          double inner = 0.0;
          if (m == 2) {
            inner = call(2);
          } else {
            for (std::size_t l = 0; l < rules[2].points.size(); ++l) {
              zs[2] = rules[2].points[l];
              inner += rules[2].weights[l] * call(3);
            }
          }
          s += rules[1].weights[j] * inner;
        }
      }
      return rules[0].weights[i] * s;
    });
    r.levels.push_back(v);
  }
  check_growth(r.levels);
  r.value = r.levels.back();
  r.error_estimate = r.levels.size() > 1 ? std::abs(r.levels.back() - r.levels[r.levels.size() - 2]) : 0.0;
  return r;
}

QuadResult integrate_product_separable(std::span<const HalfspaceFunction> factors, int n,
                                       std::span<const WeightSpec> weights, const HalfspaceQuadSpec& spec) {
  const std::size_t m = factors.size();
  if (m < 1) throw ParameterError("product order m must be >= 1");
  if (m > 3) throw CapacityError("product domains are limited to m <= 3");
  if (weights.size() != m) throw ParameterError("need one weight per factor");
  std::vector<QuadResult> parts;
  for (std::size_t j = 0; j < m; ++j) parts.push_back(integrate_halfspace(factors[j], n, weights[j], spec));
  QuadResult r;
  r.value = 1.0;
  for (const auto& p : parts) r.value *= p.value;
  for (std::size_t j = 0; j < m; ++j) {
    double others = 1.0;
    for (std::size_t i = 0; i < m; ++i)
      if (i != j) others *= parts[i].value;
    r.error_estimate += std::abs(others) * parts[j].error_estimate;
  }
  for (std::size_t l = 0; l < parts[0].levels.size(); ++l) {
    double v = 1.0;
    for (const auto& p : parts) v *= p.levels[l];
    r.levels.push_back(v);
  }
  return r;
}

double integrate_box(const HalfspaceFunction& f, const Box& box, int order, int subdivisions, WeightSpec w) {
  const int n = box.n;
  if (n < 1 || n > kMaxDim) throw DomainError("dimension n must be 1, 2 or 3");
  if (box.lo[static_cast<std::size_t>(n)] < 0.0) throw DomainError("box extends below t = 0");
  std::array<Axis, kMaxDim + 1> axes;
  for (int a = 0; a <= n; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const double step = (box.hi[ua] - box.lo[ua]) / subdivisions;
    for (int s = 0; s < subdivisions; ++s)
      append_panel(axes[ua], box.lo[ua] + step * s, box.lo[ua] + step * (s + 1), order);
  }
  Axis& at = axes[static_cast<std::size_t>(n)];
  if (w.lambda != 0.0)
    for (std::size_t q = 0; q < at.nodes.size(); ++q) at.weights[q] *= std::pow(at.nodes[q], w.lambda);

  double total = 0.0;
  std::array<std::size_t, kMaxDim> idx{};
  const std::size_t nx = axes[0].nodes.size();
  while (true) {
    HPoint z;
    z.n = n;
    double wx = 1.0;
    for (int a = 0; a < n; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      z.x[ua] = axes[ua].nodes[idx[ua]];
      wx *= axes[ua].weights[idx[ua]];
    }
    double inner = 0.0;
    for (std::size_t q = 0; q < at.nodes.size(); ++q) {
      z.t = at.nodes[q];
      inner += at.weights[q] * checked(f, z);
    }
    total += wx * inner;
    int a = n - 1;
    while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == nx) idx[static_cast<std::size_t>(a--)] = 0;
    if (a < 0) break;
  }
  return total;
}

double integrate_rn(const std::function<double(std::span<const double>)>& g, int n, int order, int panels) {
  if (n < 1 || n > kMaxDim) throw DomainError("dimension n must be 1, 2 or 3");
  // radial map r = u / (1 - u) on [0, 1), tensored with the unit sphere
  Axis u;
  for (int p = 0; p < panels; ++p)
    append_panel(u, static_cast<double>(p) / panels, static_cast<double>(p + 1) / panels, order);
  std::vector<std::array<double, kMaxDim>> dirs;
  std::vector<double> dir_weights;
  if (n == 1) {
    dirs = {{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}};
    dir_weights = {1.0, 1.0};
  } else {
    const SphereRule rule = sphere_rule({n, 64, 32});
    for (std::size_t i = 0; i < rule.points.size(); ++i) {
      dirs.push_back(rule.points[i].x);
      dir_weights.push_back(rule.weights[i]);
    }
  }
  double total = 0.0;
  std::array<double, kMaxDim> pt{};
  for (std::size_t i = 0; i < u.nodes.size(); ++i) {
    const double v = u.nodes[i];
    const double r = v / (1.0 - v);
    const double w = u.weights[i] * std::pow(r, n - 1) / ((1.0 - v) * (1.0 - v));
    double shell = 0.0;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      for (int a = 0; a < n; ++a) pt[static_cast<std::size_t>(a)] = r * dirs[d][static_cast<std::size_t>(a)];
      shell += dir_weights[d] * g(std::span<const double>(pt.data(), static_cast<std::size_t>(n)));
    }
    total += w * shell;
  }
  return total;
}

void SphereQuadSpec::validate() const {
  if (n != 2 && n != 3) throw DomainError("sphere rules exist for n = 2 and n = 3 only");
  if (azimuthal_points < 4) throw ParameterError("sphere.azimuthal must be >= 4");
  if (n == 3 && polar_points < 2) throw ParameterError("sphere.polar must be >= 2");
}

SphereRule sphere_rule(const SphereQuadSpec& spec) {
  spec.validate();
  SphereRule rule;
  rule.n = spec.n;
  const int m = spec.azimuthal_points;
  const double dphi = 2.0 * std::numbers::pi / m;
  if (spec.n == 2) {
    for (int i = 0; i < m; ++i) {
      BallPoint p;
      p.n = 2;
      p.x = {std::cos(dphi * i), std::sin(dphi * i), 0.0};
      rule.points.push_back(p);
      rule.weights.push_back(dphi);
    }
    return rule;
  }
  const GaussRule& gl = gauss_legendre(spec.polar_points);
  for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
    const double c = gl.nodes[j];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int i = 0; i < m; ++i) {
      BallPoint p;
      p.n = 3;
      p.x = {s * std::cos(dphi * i), s * std::sin(dphi * i), c};
      rule.points.push_back(p);
      rule.weights.push_back(gl.weights[j] * dphi);
    }
  }
  return rule;
}

double integrate_sphere(const BallFunction& g, const SphereQuadSpec& spec) {
  const SphereRule rule = sphere_rule(spec);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    const double v = g(rule.points[i]);
    if (!std::isfinite(v))
      throw EvaluationError("non-finite integrand on the sphere",
                            {rule.points[i].x[0], rule.points[i].x[1], rule.points[i].x[2]});
    total += rule.weights[i] * v;
  }
  return total;
}

double integrate_ball(const BallFunction& g, int radial_points, const SphereQuadSpec& sphere_spec,
                      double radial_weight_exponent) {
  if (!(radial_weight_exponent > -1.0))
    throw DivergenceError("radial weight (1 - r^2)^e is not integrable for e <= -1");
  const GaussRule radial = gauss_jacobi_unit(radial_points, radial_weight_exponent);
  const SphereRule rule = sphere_rule(sphere_spec);
  const int n = sphere_spec.n;
  double total = 0.0;
  for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
    const double r = radial.nodes[i];
    double shell = 0.0;
    for (std::size_t j = 0; j < rule.points.size(); ++j) {
      BallPoint p = rule.points[j];
      for (auto& c : p.x) c *= r;
      shell += rule.weights[j] * g(p);
    }
    total += radial.weights[i] * std::pow(1.0 + r, radial_weight_exponent) * std::pow(r, n - 1) * shell;
  }
  return total;
}

}  // namespace hsl
