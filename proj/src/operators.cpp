#include "hsl/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hsl/errors.hpp"
#include "hsl/kernels.hpp"
#include "hsl/parallel.hpp"
#include "hsl/special.hpp"

namespace hsl {

namespace {

OpResult from_quad(const QuadResult& q, double scale = 1.0) {
  OpResult r;
  r.value = scale * q.value;
  r.error_estimate = std::abs(scale) * q.error_estimate;
  for (double v : q.levels) r.levels.push_back(scale * v);
  return r;
}

template <class Fn>
OpResult guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const DivergenceError& e) {
    OpResult r;
    r.levels = e.levels();
    r.value = r.levels.empty() ? 0.0 : r.levels.back();
    r.error_estimate = std::abs(r.value);
    r.flags.push_back("divergent");
    return r;
  }
}

void check_points(std::span<const HPoint> zs, int n) {
  if (zs.empty()) throw ParameterError("need at least one point");
  for (const auto& z : zs) {
    validate(z);
    if (z.n != n) throw DomainError("point dimension does not match n");
  }
}

HPoint average(std::span<const HPoint> zs) {
  HPoint a = zs[0];
  for (std::size_t j = 1; j < zs.size(); ++j) {
    for (int i = 0; i < a.n; ++i) a.x[static_cast<std::size_t>(i)] += zs[j].x[static_cast<std::size_t>(i)];
    a.t += zs[j].t;
  }
  const double m = static_cast<double>(zs.size());
  for (double& c : a.x) c /= m;
  a.t /= m;
  return a;
}

struct CellRule {
  std::vector<HPoint> points;
  std::vector<double> weights;
};

// Tensor Gauss-Legendre on a Whitney cube, plain dz weights.
CellRule cell_rule(const WhitneyCell& cell, int order) {
  const GaussRule& g = gauss_legendre(order);
  const int n = cell.cube.n;
  const double h = cell.cube.side;
  CellRule r;
  std::array<std::size_t, kMaxDim + 1> idx{};
  while (true) {
    HPoint z;
    z.n = n;
    double w = 1.0;
    for (int a = 0; a <= n; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      z.set_coord(a, cell.cube.center[ua] + 0.5 * h * g.nodes[idx[ua]]);
      w *= 0.5 * h * g.weights[idx[ua]];
    }
    r.points.push_back(z);
    r.weights.push_back(w);
    int a = n;
    while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == g.nodes.size()) idx[static_cast<std::size_t>(a--)] = 0;
    if (a < 0) break;
  }
  return r;
}

}  // namespace

void VecExponents::validate() const {
  if (a.empty()) throw ParameterError("exponent vectors must be nonempty");
  if (a.size() != b.size()) throw ParameterError("a and b must have the same length m");
  if (a.size() > 3) throw CapacityError("m is limited to 3");
}

double trace_eval(const ProductFunction& base, int m, const HPoint& z) {
  if (m < 1 || m > 3) throw ParameterError("trace needs 1 <= m <= 3");
  validate(z);
  const std::array<HPoint, 3> zs{z, z, z};
  return base(std::span<const HPoint>(zs.data(), static_cast<std::size_t>(m)));
}

double trace_eval(const TestFunction& f, const HPoint& z) {
  if (f.domain() == Domain::Halfspace) return f(z);
  return trace_eval([&](std::span<const HPoint> zs) { return f(zs); }, f.factors(), z);
}

bool reproduce_hypothesis(const ReproduceParams& rp, int n, int k) {
  if (rp.p >= 1.0) return k > (rp.alpha + 1.0) / rp.p - 1.0;
  return k >= (rp.alpha + n + 1.0) / rp.p - (n + 1.0);
}

OpResult reproduce(const TestFunction& f, int k, const HPoint& z, const ReproduceParams& rp,
                   const HalfspaceQuadSpec& spec) {
  if (f.domain() != Domain::Halfspace) throw DomainError(f.name() + " is not a function on H");
  if (k < 0) throw ParameterError("k must be >= 0");
  if (!(rp.p > 0.0) || !(rp.alpha > -1.0)) throw ParameterError("need p > 0 and alpha > -1");
  check_points(std::span<const HPoint>(&z, 1), f.n());
  const HalfspaceBergman Q({f.n(), k});
  OpResult r = guarded([&] {
    return from_quad(integrate_halfspace([&](const HPoint& w) { return f(w) * Q(z, w); }, f.n(), WeightSpec{double(k)}, spec));
  });
  if (!reproduce_hypothesis(rp, f.n(), k)) {
    std::ostringstream os;
    os << "precondition: k=" << k << " fails the hypothesis for p=" << rp.p << ", alpha=" << rp.alpha;
    r.flags.push_back(os.str());
  }
  return r;
}

OpResult s_expanded(const VecExponents& e, const HalfspaceFunction& f, int n, std::span<const HPoint> zs,
                    const HalfspaceQuadSpec& spec) {
  e.validate();
  if (static_cast<int>(zs.size()) != e.m()) throw ParameterError("need one point per factor");
  check_points(zs, n);
  double sum_b = 0.0, pre = 1.0;
  for (int j = 0; j < e.m(); ++j) {
    sum_b += e.b[static_cast<std::size_t>(j)];
    pre *= std::pow(zs[static_cast<std::size_t>(j)].t, e.a[static_cast<std::size_t>(j)]);
  }
  auto integrand = [&](const HPoint& w) {
    double d = 1.0;
    for (int j = 0; j < e.m(); ++j) {
      const auto uj = static_cast<std::size_t>(j);
      d *= std::pow(reflected_distance(zs[uj], w), e.a[uj] + e.b[uj]);
    }
    return f(w) / d;
  };
  return guarded([&] { return from_quad(integrate_halfspace(integrand, n, WeightSpec{-n - 1.0 + sum_b}, spec), pre); });
}

double s_cell(double a, double b, const WhitneyCell& cell, const HalfspaceFunction& f, const HPoint& z, int order,
              int subdivisions) {
  if (!(a > 0.0)) throw ParameterError("cell operator needs a > 0");
  if (!(b > -1.0)) throw ParameterError("cell operator needs b > -1");
  validate(z);
  const int n = z.n;
  const double e = n + 1.0 + a + b;
  const double v = integrate_box([&](const HPoint& w) { return f(w) / std::pow(reflected_distance(z, w), e); },
                                 Box::from_cube(cell.cube), order, subdivisions, WeightSpec{b});
  return std::pow(z.t, a) * v;
}

double s_tilde(double a, double b, const HalfspaceFunction& f, const HPoint& z, int order, int subdivisions) {
  return s_cell(a, b, whitney_cell_containing(z), f, z, order, subdivisions);
}

OpResult r_expanded(const VecExponents& e, const ProductFunction& g, int n, const HPoint& w,
                    const HalfspaceQuadSpec& spec) {
  e.validate();
  check_points(std::span<const HPoint>(&w, 1), n);
  const int m = e.m();
  double sum_b = 0.0;
  std::vector<WeightSpec> ws;
  for (int j = 0; j < m; ++j) {
    sum_b += e.b[static_cast<std::size_t>(j)];
    ws.push_back(WeightSpec{e.a[static_cast<std::size_t>(j)]});
  }
  const double pre = std::pow(w.t, -m * (n + 1.0) + sum_b);
  auto integrand = [&](std::span<const HPoint> zs) {
    double d = 1.0;
    for (int j = 0; j < m; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      d *= std::pow(reflected_distance(zs[uj], w), e.a[uj] + e.b[uj]);
    }
    return g(zs) / d;
  };
  return guarded([&] { return from_quad(integrate_product_halfspace(integrand, n, ws, spec, m), pre); });
}

OpResult r_k(int k, const ProductFunction& g, int n, int m, const HPoint& w, const HalfspaceQuadSpec& spec) {
  if (k < 0) throw ParameterError("k must be >= 0");
  check_points(std::span<const HPoint>(&w, 1), n);
  const HalfspaceBergman Q({n, k});
  std::vector<WeightSpec> ws(static_cast<std::size_t>(m), WeightSpec{double(k)});
  auto integrand = [&](std::span<const HPoint> zs) {
    double v = g(zs);
    for (const auto& z : zs) v *= Q(z, w);
    return v;
  };
  return guarded([&] { return from_quad(integrate_product_halfspace(integrand, n, ws, spec, m)); });
}

int extension_order(double p, int n, std::span<const double> s) {
  if (!(p > 0.0)) throw ParameterError("p must be > 0");
  const double m = static_cast<double>(s.size());
  double need = 0.0;
  for (double sj : s) need = std::max(need, (m - 1) * (n + 1) + m * sj + p * n + 1);
  int k = 0;
  while (!(p * (n + k + 1) > need)) ++k;
  return k;
}

OpResult extend(const TestFunction& g, int k, std::span<const HPoint> zs, const HalfspaceQuadSpec& spec) {
  if (g.domain() != Domain::Halfspace) throw DomainError(g.name() + " is not a function on H");
  if (k < 0) throw ParameterError("k must be >= 0");
  check_points(zs, g.n());
  const HPoint z = average(zs);
  const HalfspaceBergman Q({g.n(), k});
  return guarded([&] {
    return from_quad(integrate_halfspace([&](const HPoint& w) { return g(w) * Q(z, w); }, g.n(), WeightSpec{double(k)}, spec));
  });
}

Extension::Extension(TestFunction g, int k, const HalfspaceQuadSpec& level_spec)
    : g_(std::move(g)), k_(k), rule_(build_halfspace_rule(g_.n(), WeightSpec{double(k)}, level_spec)) {
  if (g_.domain() != Domain::Halfspace) throw DomainError(g_.name() + " is not a function on H");
  gw_.resize(rule_.points.size());
  for (std::size_t i = 0; i < gw_.size(); ++i) gw_[i] = rule_.weights[i] * g_(rule_.points[i]);
}

double Extension::operator()(std::span<const HPoint> zs) const {
  check_points(zs, g_.n());
  const HPoint z = average(zs);
  const HalfspaceBergman Q({g_.n(), k_});
  return ordered_sum(gw_.size(), [&](std::size_t i) { return gw_[i] * Q(z, rule_.points[i]); });
}

double Extension::harmonicity_residual(std::span<const HPoint> zs, int j) const {
  std::vector<HPoint> p(zs.begin(), zs.end());
  auto& zj = p.at(static_cast<std::size_t>(j));
  const HPoint c = zj;
  const double scale = c.t;
  const double h = 1e-2 * scale;
  const double f0 = (*this)(p);
  double lap = 0.0, mag = std::abs(f0);
  for (int a = 0; a <= c.n; ++a) {
    auto at = [&](double off) {
      zj.set_coord(a, c.coord(a) + off);
      const double v = (*this)(p);
      zj = c;
      mag = std::max(mag, std::abs(v));
      return v;
    };
    lap += (-at(2 * h) + 16 * at(h) - 30 * f0 + 16 * at(-h) - at(-2 * h)) / (12 * h * h);
  }
  if (mag == 0.0) return 0.0;
  return std::abs(lap) / (mag / (scale * scale));
}

SumLemmaSides elementary_sum(const std::vector<std::vector<double>>& x, double p, std::span<const double> q) {
  if (x.empty() || x.size() != q.size()) throw ParameterError("need one q_i per sequence");
  const std::size_t len = x[0].size();
  for (const auto& xi : x) {
    if (xi.size() != len) throw ParameterError("sequences must have equal length");
    for (double v : xi)
      if (v < 0.0) throw ParameterError("sequences must be nonnegative");
  }
  SumLemmaSides s;
  for (std::size_t k = 0; k < len; ++k) {
    double prod = 1.0;
    for (const auto& xi : x) prod *= std::pow(xi[k], p);
    s.lhs += prod;
  }
  s.lhs = std::pow(s.lhs, 1.0 / p);
  s.rhs = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double sum = 0.0;
    for (double v : x[i]) sum += std::pow(v, q[i]);
    s.rhs *= std::pow(sum, 1.0 / q[i]);
  }
  return s;
}

Calibration calibrate(std::span<const double> train, std::span<const double> eval, double margin) {
  if (train.empty() || eval.empty()) throw ParameterError("calibration needs nonempty training and evaluation sets");
  Calibration c;
  c.train_max = *std::max_element(train.begin(), train.end());
  c.eval_max = *std::max_element(eval.begin(), eval.end());
  c.constant = margin * c.train_max;
  c.pass = std::isfinite(c.eval_max) && c.eval_max <= c.constant;
  return c;
}

std::vector<WhitneyCell> cell_window(int n, int max_abs_layer, double x_radius) {
  if (n < 1 || n > kMaxDim) throw DomainError("dimension n must be 1, 2 or 3");
  if (max_abs_layer < 0 || !(x_radius > 0.0)) throw ParameterError("bad cell window");
  std::vector<WhitneyCell> out;
  for (int layer = -max_abs_layer; layer <= max_abs_layer; ++layer) {
    const double h = std::ldexp(1.0, -layer);
    const auto lo = static_cast<std::int64_t>(std::floor(-x_radius / h));
    const auto hi = static_cast<std::int64_t>(std::ceil(x_radius / h)) - 1;
    std::array<std::int64_t, kMaxDim> idx{};
    for (int a = 0; a < n; ++a) idx[static_cast<std::size_t>(a)] = lo;
    while (true) {
      out.push_back(make_whitney_cell(n, layer, idx));
      int a = n - 1;
      while (a >= 0 && ++idx[static_cast<std::size_t>(a)] > hi) idx[static_cast<std::size_t>(a--)] = lo;
      if (a < 0) break;
    }
  }
  return out;
}

WindowSums s_tilde_window(double a, double b, double p, double sigma, double alpha, const HalfspaceFunction& f,
                          std::span<const WhitneyCell> window, int order) {
  if (!(p > 1.0) || !(sigma > 0.0)) throw ParameterError("need p > 1 and sigma > 0");
  if (!(a > 0.0) || !(b > -1.0)) throw ParameterError("cell operator needs a > 0, b > -1");
  std::vector<double> lhs(window.size()), rhs(window.size());
  ordered_sum(window.size(), [&](std::size_t c) {
    const WhitneyCell& cell = window[c];
    const int n = cell.cube.n;
    const CellRule rule = cell_rule(cell, order);
    std::vector<double> fw(rule.points.size());
    for (std::size_t i = 0; i < fw.size(); ++i) fw[i] = f(rule.points[i]) * std::pow(rule.points[i].t, b) * rule.weights[i];
    double in_f = 0.0, in_s = 0.0;
    for (std::size_t i = 0; i < rule.points.size(); ++i) {
      const HPoint& z = rule.points[i];
      double s = 0.0;
      for (std::size_t j = 0; j < rule.points.size(); ++j)
        s += fw[j] / std::pow(reflected_distance(z, rule.points[j]), n + 1.0 + a + b);
      s *= std::pow(z.t, a);
      const double v = std::pow(z.t, alpha) * rule.weights[i];
      in_s += std::pow(std::abs(s), p) * v;
      in_f += std::pow(std::abs(f(z)), p) * v;
    }
    lhs[c] = std::pow(in_s, sigma / p);
    rhs[c] = std::pow(in_f, sigma / p);
    return 0.0;
  });
  WindowSums w;
  for (std::size_t c = 0; c < window.size(); ++c) {
    w.lhs += lhs[c];
    w.rhs += rhs[c];
  }
  return w;
}

ComparabilitySums comparability_sums(const HalfspaceFunction& u, double alpha, double beta,
                                     std::span<const WhitneyCell> window, int order) {
  if (!(alpha > -1.0) || !(beta > 0.0)) throw ParameterError("need alpha > -1 and beta > 0");
  std::vector<double> big(window.size()), small(window.size());
  ordered_sum(window.size(), [&](std::size_t c) {
    const WhitneyCell& cell = window[c];
    const double w = std::pow(cell.eta(), cell.cube.n + 1.0);
    big[c] = w * std::pow(integrate_box(u, Box::from_cube(enlarged_cell(cell)), order, 1, WeightSpec{alpha}), beta);
    small[c] = w * std::pow(integrate_box(u, Box::from_cube(cell.cube), order, 1, WeightSpec{alpha}), beta);
    return 0.0;
  });
  ComparabilitySums s;
  for (std::size_t c = 0; c < window.size(); ++c) {
    s.enlarged += big[c];
    s.plain += small[c];
  }
  return s;
}

}  // namespace hsl
