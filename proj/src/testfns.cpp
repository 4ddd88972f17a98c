#include "hsl/testfns.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "hsl/errors.hpp"
#include "hsl/power_form.hpp"
#include "hsl/special.hpp"

namespace hsl {

struct TestFunction::Impl {
  enum class Kind { Kernel, Polynomial, Product };
  Kind kind = Kind::Kernel;
  std::string name;
  int n = 1;
  double scale = 1.0;

  // Kernel families: f = form(x - center, t + shift), or 1/2 log rho2.
  std::array<double, kMaxDim> center{};
  double shift = 0.0;
  PowerForm form;
  bool log_base = false;

  Polynomial poly;
  std::vector<TestFunction> parts;
};

namespace {

using Impl = TestFunction::Impl;

std::string fmt_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double binomial(int a, int b) {
  double r = 1.0;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

}  // namespace

TestFunction TestFunction::poisson_shift(int n, double s0) {
  if (n < 1 || n > kMaxDim) throw DomainError("dimension n must be 1, 2 or 3");
  if (!(s0 > 0.0)) throw ParameterError("poisson_shift needs s0 > 0");
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::Kernel;
  impl->name = "poisson_shift:" + fmt_double(s0);
  impl->n = n;
  impl->shift = s0;
  impl->form = PowerForm::monomial(poisson_constant(n), 1, 0.5 * (n + 1));
  return TestFunction(impl);
}

TestFunction TestFunction::derivative_kernel(const HPoint& theta, int l) {
  validate(theta);
  if (l < 0) throw ParameterError("derivative order l must be >= 0");
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::Kernel;
  const int n = theta.n;
  impl->n = n;
  std::ostringstream os;
  os << "derivative_kernel:" << l << ":";
  for (int i = 0; i <= n; ++i) os << (i ? "," : "") << theta.coord(i);
  impl->name = os.str();
  impl->center = theta.x;
  impl->shift = theta.t;
  if (n == 1) {
    if (l == 0) {
      impl->log_base = true;
    } else {
      PowerForm f = PowerForm::monomial(1.0, 1, 1.0);  // d/du of 1/2 log rho2
      for (int i = 1; i < l; ++i) f = f.d_u();
      impl->form = f;
    }
  } else {
    PowerForm f = PowerForm::monomial(1.0, 0, 0.5 * (n - 1));
    for (int i = 0; i < l; ++i) f = f.d_u();
    impl->form = f;
  }
  return TestFunction(impl);
}

TestFunction TestFunction::harmonic_polynomial_ball(int n, int degree, std::uint64_t index) {
  if (degree < 0) throw ParameterError("degree must be >= 0");
  CoeffTable t(n, degree);
  std::mt19937_64 rng(index);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k <= degree; ++k)
    for (int j = 1; j <= t.dim(k); ++j) t.at(k, j) = u(rng);
  return ball_polynomial(n, t.to_polynomial(), "harmonic_poly:" + std::to_string(degree) + ":" + std::to_string(index));
}

TestFunction TestFunction::solid_harmonic(int n, int k, int j) {
  return ball_polynomial(n, solid_harmonic_polynomial(n, k, j),
                         "solid_harmonic:" + std::to_string(k) + ":" + std::to_string(j));
}

TestFunction TestFunction::from_table(const CoeffTable& table) {
  return ball_polynomial(table.n(), table.to_polynomial(), "table:" + std::to_string(table.max_degree()));
}

TestFunction TestFunction::ball_polynomial(int n, Polynomial p, std::string name) {
  if (n != 2 && n != 3) throw DomainError("ball functions are implemented for n = 2 and n = 3 only");
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::Polynomial;
  impl->n = n;
  impl->poly = std::move(p);
  impl->name = std::move(name);
  return TestFunction(impl);
}

TestFunction TestFunction::product(std::vector<TestFunction> factors) {
  if (factors.empty()) throw ParameterError("product needs at least one factor");
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::Product;
  impl->n = factors.front().n();
  for (const auto& f : factors) {
    if (f.domain() != Domain::Halfspace) throw DomainError("product factors must live on H");
    if (f.n() != impl->n) throw DomainError("product factors must share the dimension n");
    impl->name += (impl->name.empty() ? "" : "*") + f.name();
  }
  impl->parts = std::move(factors);
  return TestFunction(impl);
}

TestFunction TestFunction::scaled(double c) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->scale *= c;
  impl->name = fmt_double(c) + "*(" + impl_->name + ")";
  return TestFunction(impl);
}

Domain TestFunction::domain() const {
  switch (impl_->kind) {
    case Impl::Kind::Kernel: return Domain::Halfspace;
    case Impl::Kind::Polynomial: return Domain::Ball;
    default: return Domain::Product;
  }
}

int TestFunction::n() const { return impl_->n; }
int TestFunction::factors() const { return impl_->kind == Impl::Kind::Product ? static_cast<int>(impl_->parts.size()) : 1; }
const TestFunction& TestFunction::factor(int j) const {
  if (impl_->kind != Impl::Kind::Product) {
    if (j != 0) throw ParameterError("factor index out of range");
    return *this;
  }
  if (j < 0 || j >= factors()) throw ParameterError("factor index out of range");
  return impl_->parts[static_cast<std::size_t>(j)];
}

const std::string& TestFunction::name() const { return impl_->name; }
int TestFunction::coord_count() const { return domain() == Domain::Ball ? impl_->n : impl_->n + 1; }

double TestFunction::eval_coords(std::span<const double> c) const {
  const Impl& f = *impl_;
  switch (f.kind) {
    case Impl::Kind::Polynomial: return f.scale * f.poly.eval(c);
    case Impl::Kind::Kernel: {
      std::array<double, kMaxDim> v{};
      for (int i = 0; i < f.n; ++i) v[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)] - f.center[static_cast<std::size_t>(i)];
      const double u = c[static_cast<std::size_t>(f.n)] + f.shift;
      if (f.log_base) {
        double r2 = u * u;
        for (int i = 0; i < f.n; ++i) r2 += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        return f.scale * 0.5 * std::log(r2);
      }
      return f.scale * f.form.eval(std::span<const double>(v.data(), static_cast<std::size_t>(f.n)), u);
    }
    default: throw UnsupportedError("product functions are evaluated on tuples of points");
  }
}

double TestFunction::operator()(const HPoint& z) const {
  if (domain() != Domain::Halfspace) throw DomainError(name() + " is not a function on H");
  if (z.n != n()) throw DomainError("point dimension does not match the function");
  validate(z);
  std::array<double, kMaxDim + 1> c{};
  for (int i = 0; i <= z.n; ++i) c[static_cast<std::size_t>(i)] = z.coord(i);
  return eval_coords(std::span<const double>(c.data(), static_cast<std::size_t>(z.n + 1)));
}

double TestFunction::operator()(std::span<const HPoint> zs) const {
  if (impl_->kind != Impl::Kind::Product) {
    if (zs.size() != 1) throw DomainError("expected a single point");
    return (*this)(zs[0]);
  }
  if (zs.size() != impl_->parts.size()) throw DomainError("expected one point per factor");
  double v = impl_->scale;
  for (std::size_t j = 0; j < zs.size(); ++j) v *= impl_->parts[j](zs[j]);
  return v;
}

double TestFunction::operator()(const BallPoint& x) const {
  if (domain() != Domain::Ball) throw DomainError(name() + " is not a function on the ball");
  if (x.n != n()) throw DomainError("point dimension does not match the function");
  if (!(x.norm() < 1.0)) throw DomainError("point outside the open unit ball");
  return eval_coords(std::span<const double>(x.x.data(), static_cast<std::size_t>(x.n)));
}

bool TestFunction::has_exact_derivatives() const { return impl_->kind != Impl::Kind::Product; }

double TestFunction::derivative(std::span<const int> gamma, std::span<const double> c) const {
  const Impl& f = *impl_;
  if (static_cast<int>(gamma.size()) != coord_count()) throw ParameterError("multi-index has the wrong length");
  int order = 0;
  for (int g : gamma) order += g;
  if (order == 0) return eval_coords(c);
  if (f.kind == Impl::Kind::Polynomial) {
    Polynomial::Exponent e{0, 0, 0};
    for (std::size_t i = 0; i < gamma.size(); ++i) e[i] = gamma[i];
    return f.scale * f.poly.derivative(e).eval(c);
  }
  if (f.kind != Impl::Kind::Kernel) throw UnsupportedError("exact derivatives are not available for " + f.name);
  std::vector<int> left(gamma.begin(), gamma.end());
  PowerForm form = f.form;
  if (f.log_base) {
    std::size_t a = 0;
    while (left[a] == 0) ++a;
    std::array<int, 3> b{0, 0, 0};
    int upow = 0;
    if (static_cast<int>(a) < f.n) b[a] = 1;
    else upow = 1;
    form = PowerForm::term(1.0, upow, b, 1.0);
    --left[a];
  }
  for (std::size_t a = 0; a < left.size(); ++a)
    for (int i = 0; i < left[a]; ++i) form = form.d_coord(static_cast<int>(a), f.n);
  std::array<double, kMaxDim> v{};
  for (int i = 0; i < f.n; ++i) v[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)] - f.center[static_cast<std::size_t>(i)];
  const double u = c[static_cast<std::size_t>(f.n)] + f.shift;
  return f.scale * form.eval(std::span<const double>(v.data(), static_cast<std::size_t>(f.n)), u);
}

std::vector<std::vector<int>> multi_indices(int dims, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(dims), 0);
  auto rec = [&](auto&& self, int axis, int left) -> void {
    if (axis == dims - 1) {
      cur[static_cast<std::size_t>(axis)] = left;
      out.push_back(cur);
      return;
    }
    for (int g = left; g >= 0; --g) {
      cur[static_cast<std::size_t>(axis)] = g;
      self(self, axis + 1, left - g);
    }
  };
  rec(rec, 0, order);
  return out;
}

double TestFunction::local_scale(std::span<const double> c) const {
  const Impl& f = *impl_;
  if (f.kind == Impl::Kind::Polynomial) {
    double r2 = 0.0;
    for (double x : c) r2 += x * x;
    return std::max(1.0 - std::sqrt(r2), 1e-3);
  }
  double r2 = 0.0;
  for (int i = 0; i < f.n; ++i) {
    const double d = c[static_cast<std::size_t>(i)] - f.center[static_cast<std::size_t>(i)];
    r2 += d * d;
  }
  const double u = c[static_cast<std::size_t>(f.n)] + f.shift;
  return std::sqrt(r2 + u * u);
}

double TestFunction::grad_norm(const GradientRequest& req, std::span<const double> c) const {
  if (req.order < 1) throw ParameterError("gradient order must be >= 1");
  if (impl_->kind == Impl::Kind::Product) throw UnsupportedError("gradients of product functions are not implemented");
  const int dims = coord_count();
  if (static_cast<int>(c.size()) != dims) throw ParameterError("point has the wrong number of coordinates");
  const auto gammas = multi_indices(dims, req.order);
  double s2 = 0.0;
  if (req.mode == GradientRequest::Mode::Exact) {
    for (const auto& g : gammas) {
      const double d = derivative(g, c);
      s2 += d * d;
    }
    return std::sqrt(s2);
  }
  const double h = req.step > 0.0 ? req.step : 1e-4 * local_scale(c);
  std::vector<double> p(c.begin(), c.end());
  for (const auto& g : gammas) {
    // tensor product of central stencils sum_i (-1)^i C(g,i) f(x + (g/2 - i) h)
    double d = 0.0;
    std::vector<int> idx(static_cast<std::size_t>(dims), 0);
    while (true) {
      double w = 1.0;
      for (std::size_t a = 0; a < idx.size(); ++a) {
        w *= ((idx[a] % 2) ? -1.0 : 1.0) * binomial(g[a], idx[a]);
        p[a] = c[a] + (0.5 * g[a] - idx[a]) * h;
      }
      d += w * eval_coords(p);
      std::size_t a = 0;
      while (a < idx.size() && ++idx[a] > g[a]) idx[a++] = 0;
      if (a == idx.size()) break;
    }
    d /= std::pow(h, req.order);
    s2 += d * d;
  }
  return std::sqrt(s2);
}

double TestFunction::grad_norm(const GradientRequest& req, const HPoint& z) const {
  if (domain() != Domain::Halfspace) throw DomainError(name() + " is not a function on H");
  validate(z);
  std::array<double, kMaxDim + 1> c{};
  for (int i = 0; i <= z.n; ++i) c[static_cast<std::size_t>(i)] = z.coord(i);
  return grad_norm(req, std::span<const double>(c.data(), static_cast<std::size_t>(z.n + 1)));
}

double TestFunction::grad_norm(const GradientRequest& req, const BallPoint& x) const {
  if (domain() != Domain::Ball) throw DomainError(name() + " is not a function on the ball");
  return grad_norm(req, std::span<const double>(x.x.data(), static_cast<std::size_t>(x.n)));
}

double TestFunction::laplacian_fd(std::span<const double> c, double h) const {
  std::vector<double> p(c.begin(), c.end());
  const double f0 = eval_coords(c);
  double lap = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    auto at = [&](double off) {
      p[a] = c[a] + off;
      const double v = eval_coords(p);
      p[a] = c[a];
      return v;
    };
    lap += (-at(2 * h) + 16 * at(h) - 30 * f0 + 16 * at(-h) - at(-2 * h)) / (12 * h * h);
  }
  return lap;
}

double TestFunction::harmonicity_residual(std::span<const double> c) const {
  const double scale = local_scale(c);
  const double h = 1e-2 * scale;
  double mag = 0.0;
  std::vector<double> p(c.begin(), c.end());
  mag = std::abs(eval_coords(c));
  for (std::size_t a = 0; a < p.size(); ++a)
    for (double off : {-2 * h, 2 * h}) {
      p[a] = c[a] + off;
      mag = std::max(mag, std::abs(eval_coords(p)));
      p[a] = c[a];
    }
  if (mag == 0.0) return 0.0;
  return std::abs(laplacian_fd(c, h)) / (mag / (scale * scale));
}

TestFunction parse_test_function(const std::string& text, int n) {
  if (text.find('*') != std::string::npos) {
    std::vector<TestFunction> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, '*')) parts.push_back(parse_test_function(item, n));
    return TestFunction::product(std::move(parts));
  }
  std::vector<std::string> fields;
  {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) fields.push_back(item);
  }
  auto num = [&](std::size_t i) {
    if (i >= fields.size()) throw ParameterError("test function '" + text + "' is missing a parameter");
    try {
      std::size_t used = 0;
      const double v = std::stod(fields[i], &used);
      if (used != fields[i].size()) throw std::invalid_argument(fields[i]);
      return v;
    } catch (const std::logic_error&) {
      throw ParameterError("bad number '" + fields[i] + "' in test function '" + text + "'");
    }
  };
  if (fields.empty()) throw ParameterError("empty test function name");
  const std::string& fam = fields[0];
  if (fam == "poisson_shift") return TestFunction::poisson_shift(n, num(1));
  if (fam == "solid_harmonic") return TestFunction::solid_harmonic(n, static_cast<int>(num(1)), static_cast<int>(num(2)));
  if (fam == "harmonic_poly")
    return TestFunction::harmonic_polynomial_ball(n, static_cast<int>(num(1)), static_cast<std::uint64_t>(num(2)));
  if (fam == "derivative_kernel") {
    const int l = static_cast<int>(num(1));
    if (fields.size() < 3) throw ParameterError("derivative_kernel needs a pole X1,...,T");
    std::vector<double> coords;
    std::stringstream ss(fields[2]);
    std::string item;
    while (std::getline(ss, item, ',')) coords.push_back(std::stod(item));
    if (coords.size() < 2 || coords.size() > kMaxDim + 1) throw ParameterError("pole needs 2 to 4 coordinates");
    HPoint theta;
    theta.n = static_cast<int>(coords.size()) - 1;
    for (int i = 0; i <= theta.n; ++i) theta.set_coord(i, coords[static_cast<std::size_t>(i)]);
    return TestFunction::derivative_kernel(theta, l);
  }
  throw ParameterError("unknown test function family '" + fam + "'");
}

}  // namespace hsl
