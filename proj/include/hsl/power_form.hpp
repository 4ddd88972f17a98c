#pragma once

// Sums of terms  c * u^a * v_1^b1 v_2^b2 v_3^b3 * (|v|^2 + u^2)^{-(p0 + j)}
// closed under d/du and d/dv_i. Used for t-derivatives of the Poisson
// kernel and for exact gradients of kernel-type test functions.

#include <array>
#include <map>
#include <span>
#include <vector>

namespace hsl {

class PowerForm {
public:
  PowerForm() = default;

  /// coef * u^a * rho2^{-p0}.
  static PowerForm monomial(double coef, int a, double p0);
  /// coef * u^a * v^b * rho2^{-p0}.
  static PowerForm term(double coef, int a, const std::array<int, 3>& b, double p0);

  PowerForm d_u() const;
  PowerForm d_v(int axis) const;
  /// Derivative along coordinate `i` of (v_1, ..., v_n, u).
  PowerForm d_coord(int i, int n) const;
  PowerForm scaled(double c) const;

  double eval(std::span<const double> v, double u) const;
  std::size_t term_count() const { return terms_.size(); }
  double base_exponent() const { return p0_; }

private:
  // (a, b1, b2, b3, j)
  using Key = std::array<int, 5>;
  struct Term {
    Key key;
    double coef;
  };

  static PowerForm from_map(double p0, const std::map<Key, double>& m);

  double p0_ = 0.0;
  std::vector<Term> terms_;
};

}  // namespace hsl
