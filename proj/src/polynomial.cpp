#include "hsl/polynomial.hpp"

#include <cmath>

namespace hsl {

Polynomial Polynomial::constant(double c) {
  Polynomial p;
  p.add_term({0, 0, 0}, c);
  return p;
}

Polynomial Polynomial::variable(int axis) {
  Polynomial p;
  Exponent e{0, 0, 0};
  e[static_cast<std::size_t>(axis)] = 1;
  p.add_term(e, 1.0);
  return p;
}

void Polynomial::add_term(const Exponent& e, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

void Polynomial::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0.0) it = terms_.erase(it);
    else ++it;
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r += o;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(double c) const {
  Polynomial r = *this;
  for (auto& [e, v] : r.terms_) v *= c;
  r.prune();
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) r.add_term({e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]}, c1 * c2);
  return r;
}

Polynomial Polynomial::pow(int e) const {
  Polynomial r = constant(1.0);
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

Polynomial Polynomial::derivative(int axis) const {
  const auto a = static_cast<std::size_t>(axis);
  Polynomial r;
  for (const auto& [e, c] : terms_) {
    if (e[a] == 0) continue;
    Exponent d = e;
    d[a] -= 1;
    r.add_term(d, c * e[a]);
  }
  return r;
}

Polynomial Polynomial::derivative(const Exponent& gamma) const {
  Polynomial r = *this;
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < gamma[static_cast<std::size_t>(a)]; ++i) r = r.derivative(a);
  return r;
}

Polynomial Polynomial::laplacian() const {
  return derivative({2, 0, 0}) + derivative({0, 2, 0}) + derivative({0, 0, 2});
}

double Polynomial::eval(std::span<const double> x) const {
  std::array<double, 3> v{};
  for (std::size_t i = 0; i < x.size() && i < 3; ++i) v[i] = x[i];
  double s = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c;
    for (std::size_t a = 0; a < 3; ++a)
      for (int i = 0; i < e[a]; ++i) m *= v[a];
    s += m;
  }
  return s;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
  return d;
}

}  // namespace hsl
