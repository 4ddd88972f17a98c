#pragma once

// Real spherical harmonics on S^{n-1}, n in {2, 3}, orthonormal for the
// unnormalized surface measure, and the coefficient tables b_k^j built on
// them. Index j runs from 1 to d_k.
//
// n = 2: j = 1 -> cos(k theta), j = 2 -> sin(k theta).
// n = 3: j = 1 -> m = 0, j = 2m -> cos(m phi), j = 2m + 1 -> sin(m phi).

#include <iosfwd>
#include <vector>

#include "hsl/polynomial.hpp"
#include "hsl/quadrature.hpp"

namespace hsl {

/// d_k, the dimension of degree-k spherical harmonics in R^n.
int harmonic_dim(int n, int k);

class SphericalBasis {
public:
  SphericalBasis(int n, int max_degree);

  int n() const { return n_; }
  int max_degree() const { return max_degree_; }
  int dim(int k) const { return harmonic_dim(n_, k); }

  /// Y_j^{(k)}(x') for a unit vector x'.
  double eval(int k, int j, const BallPoint& xp) const;
  /// All values up to max_degree: out[k][j-1].
  void eval_all(const BallPoint& xp, std::vector<std::vector<double>>& out) const;

private:
  int n_;
  int max_degree_;
};

/// Zonal harmonic Z^{(k)}(x', y') = sum_j Y_j^{(k)}(x') Y_j^{(k)}(y') as a
/// function of x'.y' (addition theorem).
double zonal_harmonic(int n, int k, double dot);

/// The solid harmonic r^k Y_j^{(k)}(x') as a homogeneous polynomial.
Polynomial solid_harmonic_polynomial(int n, int k, int j);

/// Ragged coefficient array b_k^j, 0 <= k <= K, 1 <= j <= d_k.
class CoeffTable {
public:
  CoeffTable() = default;
  CoeffTable(int n, int max_degree);

  static CoeffTable ones(int n, int max_degree);
  /// Single unit entry b_k^j = 1.
  static CoeffTable delta(int n, int max_degree, int k, int j);

  int n() const { return n_; }
  int max_degree() const { return max_degree_; }
  int dim(int k) const { return harmonic_dim(n_, k); }
  double& at(int k, int j);
  double at(int k, int j) const;
  bool same_shape(const CoeffTable& o) const { return n_ == o.n_ && max_degree_ == o.max_degree_; }

  CoeffTable operator+(const CoeffTable& o) const;
  CoeffTable operator*(double c) const;
  double max_abs_difference(const CoeffTable& o) const;

  /// Sum_k r^k sum_j b_k^j Y_j^{(k)} as a polynomial.
  Polynomial to_polynomial() const;

  /// Text form: one "k j value" line per entry.
  void write(std::ostream& os) const;
  /// Reads the text form; the degree cap is the largest k present.
  static CoeffTable read(std::istream& is, int n);

private:
  int n_ = 3;
  int max_degree_ = 0;
  std::vector<std::vector<double>> b_;
};

/// Multiplier sequence c = {c_k^j}; same ragged shape as a coefficient table.
class MultiplierSeq {
public:
  MultiplierSeq() = default;
  explicit MultiplierSeq(CoeffTable entries) : c_(std::move(entries)) {}
  static MultiplierSeq ones(int n, int max_degree) { return MultiplierSeq(CoeffTable::ones(n, max_degree)); }

  const CoeffTable& entries() const { return c_; }
  CoeffTable& entries() { return c_; }

private:
  CoeffTable c_;
};

}  // namespace hsl
