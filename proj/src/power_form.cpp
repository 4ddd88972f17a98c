#include "hsl/power_form.hpp"

#include <cmath>

namespace hsl {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

PowerForm PowerForm::monomial(double coef, int a, double p0) {
  PowerForm f;
  f.p0_ = p0;
  if (coef != 0.0) f.terms_.push_back({{a, 0, 0, 0, 0}, coef});
  return f;
}

PowerForm PowerForm::term(double coef, int a, const std::array<int, 3>& b, double p0) {
  PowerForm f;
  f.p0_ = p0;
  if (coef != 0.0) f.terms_.push_back({{a, b[0], b[1], b[2], 0}, coef});
  return f;
}

PowerForm PowerForm::from_map(double p0, const std::map<Key, double>& m) {
  PowerForm f;
  f.p0_ = p0;
  for (const auto& [k, c] : m)
    if (c != 0.0) f.terms_.push_back({k, c});
  return f;
}

PowerForm PowerForm::d_u() const {
  std::map<Key, double> out;
  for (const Term& t : terms_) {
    const int a = t.key[0];
    const double p = p0_ + t.key[4];
    if (a > 0) {
      Key k = t.key;
      k[0] = a - 1;
      out[k] += t.coef * a;
    }
    Key k = t.key;
    k[0] = a + 1;
    k[4] += 1;
    out[k] += -2.0 * p * t.coef;
  }
  return from_map(p0_, out);
}

PowerForm PowerForm::d_v(int axis) const {
  const auto ax = static_cast<std::size_t>(axis + 1);
  std::map<Key, double> out;
  for (const Term& t : terms_) {
    const int b = t.key[ax];
    const double p = p0_ + t.key[4];
    if (b > 0) {
      Key k = t.key;
      k[ax] = b - 1;
      out[k] += t.coef * b;
    }
    Key k = t.key;
    k[ax] = b + 1;
    k[4] += 1;
    out[k] += -2.0 * p * t.coef;
  }
  return from_map(p0_, out);
}

PowerForm PowerForm::d_coord(int i, int n) const { return i < n ? d_v(i) : d_u(); }

PowerForm PowerForm::scaled(double c) const {
  PowerForm f = *this;
  for (Term& t : f.terms_) t.coef *= c;
  return f;
}

double PowerForm::eval(std::span<const double> v, double u) const {
  double r2 = u * u;
  for (double c : v) r2 += c * c;
  const double inv = 1.0 / r2;
  const double base = std::pow(r2, -p0_);
  std::array<double, 3> vv{};
  for (std::size_t i = 0; i < v.size() && i < 3; ++i) vv[i] = v[i];
  double sum = 0.0;
  for (const Term& t : terms_) {
    double x = t.coef * ipow(u, t.key[0]) * ipow(inv, t.key[4]);
    if (t.key[1]) x *= ipow(vv[0], t.key[1]);
    if (t.key[2]) x *= ipow(vv[1], t.key[2]);
    if (t.key[3]) x *= ipow(vv[2], t.key[3]);
    sum += x;
  }
  return base * sum;
}

}  // namespace hsl
