#pragma once

// Discrete measures on H^m, Carleson norms (cube and star form), MH(p)
// weights and the Whitney-cell condition.

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hsl/halfspace.hpp"

namespace hsl {

struct Atom {
  std::vector<HPoint> points;  // one per factor
  double mass = 1.0;
};

class DiscreteMeasure {
public:
  DiscreteMeasure() = default;
  DiscreteMeasure(int n, int m);

  int n() const { return n_; }
  int m() const { return m_; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }

  /// Throws DomainError on mass <= 0, t <= 0 or a dimension mismatch.
  void add(Atom a);
  void add(const HPoint& z, double mass) { add(Atom{{z}, mass}); }
  DiscreteMeasure scaled(double c) const;

  /// One atom per line: m groups of "x_1 .. x_n t", then the mass.
  /// Blank lines and '#' comments are skipped. ParseError carries the line.
  static DiscreteMeasure read(std::istream& in, int n, int m);
  static DiscreteMeasure read_file(const std::string& path, int n, int m);
  void write(std::ostream& out) const;

private:
  int n_ = 1;
  int m_ = 1;
  std::vector<Atom> atoms_;
};

struct CarlesonParams {
  std::vector<double> r;
  std::vector<double> tau;

  int m() const { return static_cast<int>(r.size()); }
  void validate(int m) const;
  /// r_j > n for every j.
  bool star_hypothesis(int n) const;
};

using Candidate = std::vector<HPoint>;

struct CandidateOptions {
  /// Geometric steps between the smallest and largest cube height that still
  /// holds an atom (2t/3 .. 2t).
  int height_steps = 4;
  /// Horizontal shifts per side, as fractions of s/2.
  int shift_steps = 1;
  /// Candidates spanned by pairs of atoms.
  bool pairs = true;
};

/// Atom-centered cubes at several heights and shifts, pair midpoints, and the
/// dyadic heights in between.
std::vector<Candidate> generate_candidates(const DiscreteMeasure& mu, const CandidateOptions& opt = {});

struct CarlesonResult {
  double value = 0.0;
  Candidate argmax;
  std::size_t atoms_used = 0;
};

/// Closed-cube membership with a relative slack of 1e-12 on the faces.
bool in_closed_cube(const Cube& q, const HPoint& z);

/// max over candidates of mu(Q_{w_1} x ... x Q_{w_m}) / prod s_j^{r_j}.
CarlesonResult carleson_norm(const DiscreteMeasure& mu, const CarlesonParams& params,
                             std::span<const Candidate> candidates);
CarlesonResult carleson_norm(const DiscreteMeasure& mu, const CarlesonParams& params);

/// max over candidates of sum_atoms mass * prod t_j^{tau_j} / |z_j - w_bar_j|^{r_j+tau_j},
/// restricted to atoms with t_j <= 3 s_j unless `global`.
CarlesonResult carleson_star(const DiscreteMeasure& mu, const CarlesonParams& params,
                             std::span<const Candidate> candidates, bool global = false);
CarlesonResult carleson_star(const DiscreteMeasure& mu, const CarlesonParams& params, bool global = false);

struct Counterexample {
  double restricted = 0.0;
  /// global[i] = unrestricted sum over the first i+1 atoms.
  std::vector<double> global;
};

/// mu = sum_{k=1..K_atoms} 4^k delta_{(0, 2^k)}, n = m = 1, r = 2, tau = 1,
/// evaluated at w = (0, 2^{K_height}).
Counterexample counterexample_partial_sums(int k_atoms, int k_height);
DiscreteMeasure counterexample_measure(int k_atoms);

using Weight = std::function<double(const HPoint&)>;

/// max over cubes of (avg V)(avg V^{-q/p})^{p/q}, q = p/(p-1).
double mh_sup(const Weight& v, double p, std::span<const Cube> cubes, int order = 16, int subdivisions = 4);

/// max over window cells of mu(D_k) / eta_k^theta (m = 1). Atoms go to the
/// cell whitney_cell_containing picks.
double whitney_carleson_check(const DiscreteMeasure& mu, double theta, std::span<const WhitneyCell> window);

/// One atom per cell at its center with mass m_lambda(cell).
DiscreteMeasure atomize_weighted(std::span<const WhitneyCell> window, double lambda);

}  // namespace hsl
