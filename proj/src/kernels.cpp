#include "hsl/kernels.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "hsl/errors.hpp"
#include "hsl/special.hpp"
#include "hsl/spherical.hpp"

namespace hsl {

double poisson_h(std::span<const double> x, double t) {
  if (!(t > 0.0)) throw DomainError("Poisson kernel needs t > 0");
  const int n = static_cast<int>(x.size());
  double r2 = t * t;
  for (double c : x) r2 += c * c;
  return poisson_constant(n) * t * std::pow(r2, -0.5 * (n + 1));
}

double poisson_h(const HPoint& z) { return poisson_h(std::span<const double>(z.x.data(), static_cast<std::size_t>(z.n)), z.t); }

void HalfspaceKernelParams::validate() const {
  if (n < 1 || n > kMaxDim) throw DomainError("dimension n must be 1, 2 or 3");
  if (k < 0) throw ParameterError("Bergman order k must be >= 0");
}

HalfspaceBergman::HalfspaceBergman(HalfspaceKernelParams params) : params_(params) {
  params_.validate();
  const int n = params_.n;
  PowerForm f = PowerForm::monomial(poisson_constant(n), 1, 0.5 * (n + 1));
  for (int i = 0; i <= params_.k; ++i) f = f.d_u();
  const double scale = std::pow(-2.0, params_.k + 1) / std::tgamma(params_.k + 1.0);
  form_ = f.scaled(scale);
}

double HalfspaceBergman::operator()(const HPoint& z, const HPoint& w) const {
  std::array<double, kMaxDim> v{};
  for (int i = 0; i < params_.n; ++i) v[static_cast<std::size_t>(i)] = z.x[static_cast<std::size_t>(i)] - w.x[static_cast<std::size_t>(i)];
  return form_.eval(std::span<const double>(v.data(), static_cast<std::size_t>(params_.n)), z.t + w.t);
}

double bergman_h(const HalfspaceKernelParams& params, const HPoint& z, const HPoint& w) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<HalfspaceBergman>> cache;
  const HalfspaceBergman* kernel;
  {
    std::lock_guard lock(mutex);
    auto& slot = cache[{params.n, params.k}];
    if (!slot) slot = std::make_unique<HalfspaceBergman>(params);
    kernel = slot.get();
  }
  return (*kernel)(z, w);
}

double kernel_bound_ratio(const HalfspaceKernelParams& params, const HPoint& z, const HPoint& w) {
  return std::abs(bergman_h(params, z, w)) * std::pow(reflected_distance(z, w), params.k + params.n + 1);
}

double poisson_ball(const BallPoint& x, const BallPoint& yp) {
  const double r = x.norm();
  if (!(r < 1.0)) throw DomainError("ball Poisson kernel needs |x| < 1");
  double d2 = 0.0;
  for (int i = 0; i < x.n; ++i) {
    const double d = x.x[static_cast<std::size_t>(i)] - yp.x[static_cast<std::size_t>(i)];
    d2 += d * d;
  }
  return (1.0 - r * r) / (sphere_area(x.n) * std::pow(d2, 0.5 * x.n));
}

void BallKernelParams::validate() const {
  if (n != 2 && n != 3) throw DomainError("ball kernels are implemented for n = 2 and n = 3 only");
  if (!(m > -1.0)) throw ParameterError("ball Bergman weight m must exceed -1");
  if (truncation_degree < 0) throw ParameterError("truncation degree must be >= 0");
}

double ball_bergman_coefficient(int n, double m, int k) {
  const double h = 0.5 * n;
  return 2.0 * std::exp(std::lgamma(m + 1.0 + k + h) - std::lgamma(m + 1.0) - std::lgamma(k + h));
}

SeriesValue bergman_ball(const BallKernelParams& params, const BallPoint& x, const BallPoint& y) {
  params.validate();
  const int n = params.n;
  const double r = x.norm();
  const double rho = y.norm();
  if (!(r < 1.0) || !(rho < 1.0)) throw DomainError("ball Bergman kernel needs interior points");
  double dot = 1.0;
  if (r > 0.0 && rho > 0.0) {
    dot = 0.0;
    for (int i = 0; i < n; ++i) dot += x.x[static_cast<std::size_t>(i)] * y.x[static_cast<std::size_t>(i)];
    dot /= r * rho;
  }
  const double q = r * rho;
  const int K = params.truncation_degree;
  SeriesValue out;
  double qk = 1.0;
  for (int k = 0; k <= K; ++k) {
    if (k > 0 && qk == 0.0) break;
    out.value += ball_bergman_coefficient(n, params.m, k) * qk * zonal_harmonic(n, k, dot);
    qk *= q;
  }
  // |Z^{(k)}| <= d_k / area; the bounding terms have a decreasing ratio.
  auto bound = [&](int k) {
    return ball_bergman_coefficient(n, params.m, k) * std::pow(q, k) * harmonic_dim(n, k) / sphere_area(n);
  };
  if (q == 0.0) return out;
  const double first = bound(K + 1);
  const double ratio = bound(K + 2) / first;
  if (!(ratio < 1.0)) throw TruncationError("ball kernel series tail does not contract at this truncation degree");
  out.tail_bound = first / (1.0 - ratio);
  if (out.tail_bound > params.tolerance)
    throw TruncationError("ball kernel series tail bound " + std::to_string(out.tail_bound) + " exceeds tolerance");
  return out;
}

}  // namespace hsl
