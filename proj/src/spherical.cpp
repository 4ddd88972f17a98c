#include "hsl/spherical.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "hsl/errors.hpp"

namespace hsl {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dim(int n) {
  if (n != 2 && n != 3) throw DomainError("spherical harmonics are implemented for n = 2 and n = 3 only");
}

// (m, use_sin) for index j of degree k; m = 0 for j = 1.
std::pair<int, bool> order_of(int n, int k, int j) {
  if (j < 1 || j > harmonic_dim(n, k)) throw ParameterError("harmonic index out of range");
  if (n == 2) return {k, j == 2};
  if (j == 1) return {0, false};
  return {j / 2, j % 2 == 1};
}

double binomial(int a, int b) {
  if (b < 0 || b > a) return 0.0;
  return std::round(std::exp(std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0)));
}

// Re / Im of (x + i y)^m.
Polynomial complex_power(int m, bool imaginary) {
  Polynomial p;
  for (int i = 0; i <= m; ++i) {
    if ((i % 2 == 1) != imaginary) continue;
    const double sign = ((i / 2) % 2 == 0) ? 1.0 : -1.0;
    p.add_term({m - i, i, 0}, sign * binomial(m, i));
  }
  return p;
}

}  // namespace

int harmonic_dim(int n, int k) {
  check_dim(n);
  if (k < 0) return 0;
  if (n == 2) return k == 0 ? 1 : 2;
  return 2 * k + 1;
}

SphericalBasis::SphericalBasis(int n, int max_degree) : n_(n), max_degree_(max_degree) {
  check_dim(n);
  if (max_degree < 0) throw ParameterError("maximum degree must be >= 0");
}

double SphericalBasis::eval(int k, int j, const BallPoint& xp) const {
  const auto [m, use_sin] = order_of(n_, k, j);
  if (n_ == 2) {
    const double th = std::atan2(xp.x[1], xp.x[0]);
    if (k == 0) return 1.0 / std::sqrt(2.0 * kPi);
    return (use_sin ? std::sin(k * th) : std::cos(k * th)) / std::sqrt(kPi);
  }
  const double c = std::clamp(xp.x[2], -1.0, 1.0);
  const double theta = std::acos(c);
  const double phi = std::atan2(xp.x[1], xp.x[0]);
  // sph_legendre carries (-1)^m; drop it
  double y = std::sph_legendre(static_cast<unsigned>(k), static_cast<unsigned>(m), theta);
  if (m % 2 == 1) y = -y;
  if (m == 0) return y;
  return std::sqrt(2.0) * y * (use_sin ? std::sin(m * phi) : std::cos(m * phi));
}

void SphericalBasis::eval_all(const BallPoint& xp, std::vector<std::vector<double>>& out) const {
  out.resize(static_cast<std::size_t>(max_degree_ + 1));
  for (int k = 0; k <= max_degree_; ++k) {
    auto& row = out[static_cast<std::size_t>(k)];
    row.resize(static_cast<std::size_t>(dim(k)));
    for (int j = 1; j <= dim(k); ++j) row[static_cast<std::size_t>(j - 1)] = eval(k, j, xp);
  }
}

double zonal_harmonic(int n, int k, double dot) {
  check_dim(n);
  const double c = std::clamp(dot, -1.0, 1.0);
  if (n == 2) {
    if (k == 0) return 1.0 / (2.0 * kPi);
    return std::cos(k * std::acos(c)) / kPi;
  }
  return (2.0 * k + 1.0) / (4.0 * kPi) * std::legendre(static_cast<unsigned>(k), c);
}

Polynomial solid_harmonic_polynomial(int n, int k, int j) {
  const auto [m, use_sin] = order_of(n, k, j);
  if (n == 2) {
    if (k == 0) return Polynomial::constant(1.0 / std::sqrt(2.0 * kPi));
    return complex_power(k, use_sin) * (1.0 / std::sqrt(kPi));
  }
  // r^k P_k^m(z/r) trig(m phi) = Re/Im (x+iy)^m * r^{k-m} P_k^{(m)}(z/r)
  Polynomial radial;
  const Polynomial r2 = Polynomial::variable(0).pow(2) + Polynomial::variable(1).pow(2) + Polynomial::variable(2).pow(2);
  for (int i = 0; 2 * i <= k; ++i) {
    const int power = k - 2 * i;
    if (power < m) continue;
    double a = std::ldexp(1.0, -k) * ((i % 2) ? -1.0 : 1.0) * binomial(k, i) * binomial(2 * k - 2 * i, k);
    for (int d = 0; d < m; ++d) a *= power - d;
    Polynomial term;
    term.add_term({0, 0, power - m}, a);
    radial += term * r2.pow(i);
  }
  double norm = std::sqrt((2.0 * k + 1.0) / (4.0 * kPi) *
                          std::exp(std::lgamma(k - m + 1.0) - std::lgamma(k + m + 1.0)));
  if (m > 0) norm *= std::sqrt(2.0);
  return complex_power(m, use_sin) * radial * norm;
}

CoeffTable::CoeffTable(int n, int max_degree) : n_(n), max_degree_(max_degree) {
  check_dim(n);
  if (max_degree < 0) throw ParameterError("maximum degree must be >= 0");
  b_.resize(static_cast<std::size_t>(max_degree + 1));
  for (int k = 0; k <= max_degree; ++k) b_[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(dim(k)), 0.0);
}

CoeffTable CoeffTable::ones(int n, int max_degree) {
  CoeffTable t(n, max_degree);
  for (auto& row : t.b_) std::fill(row.begin(), row.end(), 1.0);
  return t;
}

CoeffTable CoeffTable::delta(int n, int max_degree, int k, int j) {
  CoeffTable t(n, max_degree);
  t.at(k, j) = 1.0;
  return t;
}

double& CoeffTable::at(int k, int j) {
  if (k < 0 || k > max_degree_ || j < 1 || j > dim(k)) throw ParameterError("coefficient index out of range");
  return b_[static_cast<std::size_t>(k)][static_cast<std::size_t>(j - 1)];
}

double CoeffTable::at(int k, int j) const { return const_cast<CoeffTable*>(this)->at(k, j); }

CoeffTable CoeffTable::operator+(const CoeffTable& o) const {
  if (!same_shape(o)) throw ShapeError("coefficient tables differ in shape");
  CoeffTable r = *this;
  for (std::size_t k = 0; k < b_.size(); ++k)
    for (std::size_t j = 0; j < b_[k].size(); ++j) r.b_[k][j] += o.b_[k][j];
  return r;
}

CoeffTable CoeffTable::operator*(double c) const {
  CoeffTable r = *this;
  for (auto& row : r.b_)
    for (double& v : row) v *= c;
  return r;
}

double CoeffTable::max_abs_difference(const CoeffTable& o) const {
  if (!same_shape(o)) throw ShapeError("coefficient tables differ in shape");
  double d = 0.0;
  for (std::size_t k = 0; k < b_.size(); ++k)
    for (std::size_t j = 0; j < b_[k].size(); ++j) d = std::max(d, std::abs(b_[k][j] - o.b_[k][j]));
  return d;
}

Polynomial CoeffTable::to_polynomial() const {
  Polynomial p;
  for (int k = 0; k <= max_degree_; ++k)
    for (int j = 1; j <= dim(k); ++j) {
      const double c = at(k, j);
      if (c != 0.0) p += solid_harmonic_polynomial(n_, k, j) * c;
    }
  return p;
}

void CoeffTable::write(std::ostream& os) const {
  os.precision(17);
  for (int k = 0; k <= max_degree_; ++k)
    for (int j = 1; j <= dim(k); ++j) os << k << ' ' << j << ' ' << at(k, j) << '\n';
}

CoeffTable CoeffTable::read(std::istream& is, int n) {
  struct Entry {
    int k, j;
    double v;
  };
  std::vector<Entry> entries;
  std::string line;
  int lineno = 0;
  int kmax = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    Entry e{};
    if (!(ls >> e.k)) continue;
    if (!(ls >> e.j >> e.v)) throw ParseError("expected 'k j value'", lineno);
    std::string extra;
    if (ls >> extra) throw ParseError("trailing text after 'k j value'", lineno);
    if (e.k < 0 || e.j < 1 || e.j > harmonic_dim(n, e.k)) throw ParseError("coefficient index out of range", lineno);
    kmax = std::max(kmax, e.k);
    entries.push_back(e);
  }
  CoeffTable t(n, kmax);
  for (const Entry& e : entries) t.at(e.k, e.j) = e.v;
  return t;
}

}  // namespace hsl
