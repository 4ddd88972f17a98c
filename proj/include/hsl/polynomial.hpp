#pragma once

#include <array>
#include <map>
#include <span>
#include <string>

namespace hsl {

/// Real polynomial in up to three variables with exact arithmetic on
/// exponents. Used for harmonic polynomials on the ball.
class Polynomial {
public:
  using Exponent = std::array<int, 3>;

  Polynomial() = default;
  static Polynomial constant(double c);
  /// The coordinate function x_axis.
  static Polynomial variable(int axis);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double c) const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial pow(int e) const;

  Polynomial derivative(int axis) const;
  /// D^gamma for a multi-index gamma.
  Polynomial derivative(const Exponent& gamma) const;
  Polynomial laplacian() const;

  double eval(std::span<const double> x) const;
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponent, double>& terms() const { return terms_; }
  void add_term(const Exponent& e, double c);

private:
  void prune();
  std::map<Exponent, double> terms_;
};

}  // namespace hsl
