#include "hsl/special.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "hsl/errors.hpp"

namespace hsl {

namespace {

// Golub-Welsch: eigen-decomposition of the Jacobi matrix of the monic
// orthogonal polynomials.
GaussRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double mu0) {
  const auto order = diag.size();
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  if (order == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
  for (Eigen::Index i = 0; i < order; ++i) {
    const double v = solver.eigenvectors()(0, i);
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v * v;
  }
  return rule;
}

}  // namespace

GaussRule gauss_jacobi(int order, double alpha, double beta) {
  if (order < 1) throw ParameterError("quadrature order must be >= 1");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DivergenceError("Jacobi weight exponents must exceed -1");
  const double ab = alpha + beta;
  Eigen::VectorXd diag(order);
  Eigen::VectorXd off(std::max(order - 1, 1));
  for (int k = 0; k < order; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 0)
      diag(k) = (beta - alpha) / (ab + 2.0);
    else
      diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
  }
  for (int k = 1; k < order; ++k) {
    const double s = 2.0 * k + ab;
    double b2;
    if (k == 1)
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
    else
      b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    off(k - 1) = std::sqrt(b2);
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                              std::lgamma(ab + 2.0));
  return golub_welsch(diag, off.head(std::max(order - 1, 0)), mu0);
}

const GaussRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussRule>(gauss_jacobi(order, 0.0, 0.0));
  return *slot;
}

GaussRule gauss_jacobi_unit(int order, double exponent) {
  GaussRule ref = gauss_jacobi(order, exponent, 0.0);
  const double scale = std::pow(0.5, exponent + 1.0);
  for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
    ref.nodes[i] = 0.5 * (1.0 + ref.nodes[i]);
    ref.weights[i] *= scale;
  }
  return ref;
}

double gamma_ratio(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("gamma_ratio needs positive arguments");
  if (a < 150.0 && b < 150.0) return std::tgamma(a) / std::tgamma(b);
  return std::exp(std::lgamma(a) - std::lgamma(b));
}

double fractional_derivative_factor(int k, int n, double t) {
  if (!(t > 0.0)) throw DomainError("fractional derivative order must be positive");
  const double base = k + 0.5 * n;
  if (base + t < 150.0) return std::tgamma(base + t) / (std::tgamma(base) * std::tgamma(t));
  return std::exp(std::lgamma(base + t) - std::lgamma(base) - std::lgamma(t));
}

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double poisson_constant(int n) {
  const double h = 0.5 * (n + 1);
  return std::tgamma(h) / std::pow(std::numbers::pi, h);
}

}  // namespace hsl
