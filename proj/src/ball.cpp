#include "hsl/ball.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "hsl/errors.hpp"
#include "hsl/parallel.hpp"
#include "hsl/special.hpp"

namespace hsl {

namespace {

using Rows = std::vector<std::vector<double>>;

int total_dim(int n, int K) {
  int d = 0;
  for (int k = 0; k <= K; ++k) d += harmonic_dim(n, k);
  return d;
}

// flattened Y_j^{(k)} at every rule node: rows = nodes, columns = (k, j)
Eigen::MatrixXd basis_matrix(const SphericalBasis& basis, const std::vector<BallPoint>& pts) {
  const int D = total_dim(basis.n(), basis.max_degree());
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(pts.size()), D);
  Rows vals;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    basis.eval_all(pts[p], vals);
    Eigen::Index c = 0;
    for (const auto& row : vals)
      for (double v : row) Y(static_cast<Eigen::Index>(p), c++) = v;
  }
  return Y;
}

BallPoint scaled(const BallPoint& p, double r) {
  BallPoint q = p;
  for (auto& c : q.x) c *= r;
  return q;
}

double poly_at(const Polynomial& p, const BallPoint& x) {
  return p.eval(std::span<const double>(x.x.data(), static_cast<std::size_t>(x.n)));
}

}  // namespace

SphereQuadSpec expansion_sphere_spec(int n, int max_degree) {
  if (n == 2) return SphereQuadSpec{2, std::max(4 * (max_degree + 1), 128), 2};
  const int polar = std::max(max_degree + 8, 32);
  return SphereQuadSpec{3, 2 * polar, polar};
}

CoeffTable expand(const BallFunction& f, int n, int max_degree, double r_probe,
                  const std::optional<SphereQuadSpec>& sphere) {
  if (max_degree < 0) throw ParameterError("expand: negative degree cap");
  if (!(r_probe > 0.0 && r_probe < 1.0)) throw ParameterError("expand: r_probe must lie in (0, 1)");
  if (std::pow(r_probe, max_degree) < 1e3 * std::numeric_limits<double>::min())
    throw ParameterError("expand: r_probe^K underflows");
  const SphereQuadSpec spec = sphere ? *sphere : expansion_sphere_spec(n, max_degree);
  if (spec.n != n) throw ParameterError("expand: sphere rule dimension differs from n");
  const SphereRule rule = sphere_rule(spec);
  const SphericalBasis basis(n, max_degree);
  CoeffTable out(n, max_degree);
  Rows vals;
  for (std::size_t p = 0; p < rule.points.size(); ++p) {
    const double fv = rule.weights[p] * f(scaled(rule.points[p], r_probe));
    basis.eval_all(rule.points[p], vals);
    for (int k = 0; k <= max_degree; ++k)
      for (int j = 1; j <= out.dim(k); ++j) out.at(k, j) += fv * vals[static_cast<std::size_t>(k)][static_cast<std::size_t>(j - 1)];
  }
  for (int k = 0; k <= max_degree; ++k) {
    const double s = std::pow(r_probe, -k);
    for (int j = 1; j <= out.dim(k); ++j) out.at(k, j) *= s;
  }
  return out;
}

double synth(const CoeffTable& table, const BallPoint& x) {
  const double r = x.norm();
  if (!(r < 1.0)) throw DomainError("synth: point outside the open ball");
  const SphericalBasis basis(table.n(), table.max_degree());
  if (r == 0.0) {
    BallPoint e;
    e.n = table.n();
    e.x = {1.0, 0.0, 0.0};
    return table.at(0, 1) * basis.eval(0, 1, e);
  }
  Rows vals;
  basis.eval_all(scaled(x, 1.0 / r), vals);
  double sum = 0.0, rk = 1.0;
  for (int k = 0; k <= table.max_degree(); ++k, rk *= r) {
    double block = 0.0;
    for (int j = 1; j <= table.dim(k); ++j) block += table.at(k, j) * vals[static_cast<std::size_t>(k)][static_cast<std::size_t>(j - 1)];
    sum += rk * block;
  }
  return sum;
}

CoeffTable resized(const CoeffTable& table, int max_degree) {
  CoeffTable out(table.n(), max_degree);
  for (int k = 0; k <= std::min(max_degree, table.max_degree()); ++k)
    for (int j = 1; j <= out.dim(k); ++j) out.at(k, j) = table.at(k, j);
  return out;
}

CoeffTable convolve(const CoeffTable& f, const CoeffTable& g) {
  if (!f.same_shape(g)) throw ShapeError("convolve: coefficient tables differ in shape");
  CoeffTable out(f.n(), f.max_degree());
  for (int k = 0; k <= f.max_degree(); ++k)
    for (int j = 1; j <= f.dim(k); ++j) out.at(k, j) = f.at(k, j) * g.at(k, j);
  return out;
}

CoeffTable convolve(const MultiplierSeq& c, const CoeffTable& f) { return convolve(c.entries(), f); }

CoeffTable lambda_t(double t, const CoeffTable& f) {
  if (!(t > 0.0)) throw ParameterError("lambda_t: order must be positive");
  CoeffTable out = f;
  for (int k = 0; k <= f.max_degree(); ++k) {
    const double c = fractional_derivative_factor(k, f.n(), t);
    for (int j = 1; j <= f.dim(k); ++j) out.at(k, j) *= c;
  }
  return out;
}

CoeffTable g_of_c(const MultiplierSeq& c) { return c.entries(); }

FunctionalResult multiplier_functional(const CoeffTable& g, double s, double m, double exponent_shift,
                                       const std::vector<double>& rho_grid, const SphereQuadSpec& x_spec,
                                       const SphereQuadSpec& y_spec) {
  if (rho_grid.empty()) throw ParameterError("multiplier_functional: empty rho grid");
  if (!(s >= 1.0)) throw ParameterError("multiplier_functional: s must be >= 1");
  if (!(m > -1.0)) throw ParameterError("multiplier_functional: m must exceed -1");
  for (double rho : rho_grid)
    if (!(rho >= 0.0 && rho < 1.0)) throw ParameterError("multiplier_functional: rho grid must lie in [0, 1)");
  if (x_spec.n != g.n() || y_spec.n != g.n()) throw ParameterError("multiplier_functional: sphere rule dimension");

  const SphericalBasis basis(g.n(), g.max_degree());
  const SphereRule xr = sphere_rule(x_spec), yr = sphere_rule(y_spec);
  const Eigen::MatrixXd Yx = basis_matrix(basis, xr.points);
  const Eigen::MatrixXd Yy = basis_matrix(basis, yr.points);
  const Eigen::Map<const Eigen::VectorXd> wx(xr.weights.data(), static_cast<Eigen::Index>(xr.weights.size()));

  Eigen::VectorXd base(Yx.cols());
  std::vector<int> degree(static_cast<std::size_t>(Yx.cols()));
  {
    Eigen::Index c = 0;
    for (int k = 0; k <= g.max_degree(); ++k) {
      const double lam = fractional_derivative_factor(k, g.n(), m + 1.0);
      for (int j = 1; j <= g.dim(k); ++j, ++c) {
        base(c) = lam * g.at(k, j);
        degree[static_cast<std::size_t>(c)] = k;
      }
    }
  }

  const bool sup_norm = std::isinf(s);
  std::vector<FunctionalResult> per(rho_grid.size());
  ordered_sum(rho_grid.size(), [&](std::size_t i) {
    const double rho = rho_grid[i];
    Eigen::VectorXd a = base;
    for (Eigen::Index c = 0; c < a.size(); ++c) a(c) *= std::pow(rho, degree[static_cast<std::size_t>(c)]);
    // F(y_q, x_p) = sum_c Y_c(y_q) a_c Y_c(x_p)
    const Eigen::MatrixXd F = Yy * a.asDiagonal() * Yx.transpose();
    const double damp = std::pow(1.0 - rho, exponent_shift);
    FunctionalResult best;
    best.rho = rho;
    for (Eigen::Index q = 0; q < F.rows(); ++q) {
      double norm;
      if (sup_norm) {
        norm = F.row(q).cwiseAbs().maxCoeff();
      } else {
        norm = std::pow((F.row(q).transpose().cwiseAbs().array().pow(s) * wx.array()).sum(), 1.0 / s);
      }
      const double v = damp * norm;
      if (v > best.value || q == 0) {
        best.value = v;
        best.y = yr.points[static_cast<std::size_t>(q)];
      }
    }
    per[i] = best;
    return 0.0;
  });
  FunctionalResult out = per.front();
  for (const auto& r : per)
    if (r.value > out.value) out = r;
  return out;
}

double exponent_l(const MultiplierParams& p) { return p.m + 1 + p.N + p.beta - p.alpha; }
double exponent_k(const MultiplierParams& p) { return p.m + p.N + p.beta - p.alpha; }
double exponent_n(const MultiplierParams& p) { return p.beta - p.alpha + p.m + p.N + 1; }

FunctionalResult functional_l(const CoeffTable& g, double s, const MultiplierParams& p) {
  return multiplier_functional(g, s, p.m, exponent_l(p), p.rho_grid, p.x_spec, p.y_spec);
}
FunctionalResult functional_k(const CoeffTable& g, double s, const MultiplierParams& p) {
  return multiplier_functional(g, s, p.m, exponent_k(p), p.rho_grid, p.x_spec, p.y_spec);
}
FunctionalResult functional_n(const CoeffTable& g, double s, const MultiplierParams& p) {
  return multiplier_functional(g, s, p.m, exponent_n(p), p.rho_grid, p.x_spec, p.y_spec);
}
FunctionalResult functional_n1(const CoeffTable& g, const MultiplierParams& p) { return functional_n(g, 1.0, p); }

std::vector<Polynomial> gradient_tensor(const Polynomial& p, int n, int N) {
  if (N < 0) throw ParameterError("gradient_tensor: negative order");
  if (N > 2) throw UnsupportedError("gradient_tensor: only N <= 2");
  if (N == 0) return {p};
  std::vector<Polynomial> out;
  for (int i = 0; i < n; ++i) {
    const Polynomial di = p.derivative(i);
    if (N == 1) {
      out.push_back(di);
      continue;
    }
    for (int j = 0; j < n; ++j) out.push_back(di.derivative(j));
  }
  return out;
}

IdentitySides verify_convolution_identity(const CoeffTable& g, const CoeffTable& f, int N, double m, double r,
                                          const BallPoint& x_prime, const SphereQuadSpec& sphere_spec,
                                          int radial_points) {
  if (N > 2) throw UnsupportedError("convolution identity: only N <= 2");
  if (N < 0) throw ParameterError("convolution identity: negative N");
  if (g.n() != f.n() || sphere_spec.n != f.n()) throw ShapeError("convolution identity: dimensions differ");
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("convolution identity: r must lie in (0, 1)");
  if (!(m > -1.0)) throw ParameterError("convolution identity: m must exceed -1");
  const int n = f.n();
  const int K = std::max(g.max_degree(), f.max_degree());
  const CoeffTable c = resized(g, K);
  const auto comps = gradient_tensor(f.to_polynomial(), n, N);

  IdentitySides out;
  const BallPoint at = scaled(x_prime, r * r / x_prime.norm());
  for (const auto& comp : comps) {
    const CoeffTable b = expand([&](const BallPoint& x) { return poly_at(comp, x); }, n, K, 0.5);
    out.lhs.push_back(synth(convolve(c, b), at));
  }

  // kernel Lambda_{m+1}(g * P_xi)(rR x') = sum_k (rR)^k lam_k sum_j c_k^j Y(xi) Y(x')
  const SphericalBasis basis(n, K);
  Rows yx;
  basis.eval_all(scaled(x_prime, 1.0 / x_prime.norm()), yx);
  std::vector<std::vector<double>> weighted(static_cast<std::size_t>(K + 1));
  for (int k = 0; k <= K; ++k) {
    const double lam = fractional_derivative_factor(k, n, m + 1.0);
    for (int j = 1; j <= c.dim(k); ++j)
      weighted[static_cast<std::size_t>(k)].push_back(lam * c.at(k, j) * yx[static_cast<std::size_t>(k)][static_cast<std::size_t>(j - 1)]);
  }
  const GaussRule radial = gauss_jacobi_unit(radial_points, m);
  const SphereRule rule = sphere_rule(sphere_spec);
  std::vector<Rows> yxi(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q) basis.eval_all(rule.points[q], yxi[q]);

  out.rhs.assign(comps.size(), 0.0);
  for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
    const double R = radial.nodes[i];
    const double wr = 2.0 * radial.weights[i] * std::pow(1.0 + R, m) * std::pow(R, n - 1);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      double kern = 0.0, pw = 1.0;
      for (int k = 0; k <= K; ++k, pw *= r * R) {
        double block = 0.0;
        const auto& row = yxi[q][static_cast<std::size_t>(k)];
        const auto& wk = weighted[static_cast<std::size_t>(k)];
        for (std::size_t j = 0; j < row.size(); ++j) block += wk[j] * row[j];
        kern += pw * block;
      }
      const BallPoint y = scaled(rule.points[q], r * R);
      const double w = wr * rule.weights[q] * kern;
      for (std::size_t cix = 0; cix < comps.size(); ++cix) out.rhs[cix] += w * poly_at(comps[cix], y);
    }
  }
  for (std::size_t i = 0; i < comps.size(); ++i) {
    out.lhs_norm += out.lhs[i] * out.lhs[i];
    out.rhs_norm += out.rhs[i] * out.rhs[i];
    out.max_abs_difference = std::max(out.max_abs_difference, std::abs(out.lhs[i] - out.rhs[i]));
  }
  out.lhs_norm = std::sqrt(out.lhs_norm);
  out.rhs_norm = std::sqrt(out.rhs_norm);
  return out;
}

double mean_gradient_norm(const CoeffTable& h, int N, double r, const SphereQuadSpec& sphere_spec) {
  if (!(r >= 0.0 && r < 1.0)) throw ParameterError("mean_gradient_norm: r must lie in [0, 1)");
  const auto comps = gradient_tensor(h.to_polynomial(), h.n(), N);
  const SphereRule rule = sphere_rule(sphere_spec);
  double total = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const BallPoint y = scaled(rule.points[q], r);
    double sq = 0.0;
    for (const auto& c : comps) {
      const double v = poly_at(c, y);
      sq += v * v;
    }
    total += rule.weights[q] * std::sqrt(sq);
  }
  return total / sphere_area(h.n());
}

}  // namespace hsl
