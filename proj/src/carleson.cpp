#include "hsl/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "hsl/errors.hpp"
#include "hsl/parallel.hpp"
#include "hsl/quadrature.hpp"

namespace hsl {

DiscreteMeasure::DiscreteMeasure(int n, int m) : n_(n), m_(m) {
  if (n < 1 || n > kMaxDim) throw DomainError("measure: n must be 1, 2 or 3");
  if (m < 1) throw DomainError("measure: m must be >= 1");
}

void DiscreteMeasure::add(Atom a) {
  if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw DomainError("measure: atom mass must be positive");
  if (static_cast<int>(a.points.size()) != m_) throw DomainError("measure: atom has the wrong number of factors");
  for (const auto& z : a.points) {
    if (z.n != n_) throw DomainError("measure: atom dimension mismatch");
    validate(z);
  }
  atoms_.push_back(std::move(a));
}

DiscreteMeasure DiscreteMeasure::scaled(double c) const {
  DiscreteMeasure out(n_, m_);
  for (auto a : atoms_) {
    a.mass *= c;
    out.add(std::move(a));
  }
  return out;
}

DiscreteMeasure DiscreteMeasure::read(std::istream& in, int n, int m) {
  DiscreteMeasure mu(n, m);
  const std::size_t want = static_cast<std::size_t>(m * (n + 1) + 1);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<double> v;
    std::string tok;
    while (ss >> tok) {
      std::size_t used = 0;
      double d = 0.0;
      try {
        d = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw ParseError("measure: bad number '" + tok + "'", lineno);
      v.push_back(d);
    }
    if (v.empty()) continue;
    if (v.size() != want)
      throw ParseError("measure: expected " + std::to_string(want) + " numbers, got " + std::to_string(v.size()),
                       lineno);
    Atom a;
    std::size_t i = 0;
    for (int j = 0; j < m; ++j) {
      HPoint z;
      z.n = n;
      for (int d = 0; d < n; ++d) z.x[static_cast<std::size_t>(d)] = v[i++];
      z.t = v[i++];
      a.points.push_back(z);
    }
    a.mass = v[i];
    try {
      mu.add(std::move(a));
    } catch (const DomainError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return mu;
}

DiscreteMeasure DiscreteMeasure::read_file(const std::string& path, int n, int m) {
  std::ifstream in(path);
  if (!in) throw ParseError("measure: cannot open " + path, 0);
  return read(in, n, m);
}

void DiscreteMeasure::write(std::ostream& out) const {
  out.precision(17);
  for (const auto& a : atoms_) {
    for (const auto& z : a.points) {
      for (int d = 0; d < n_; ++d) out << z.x[static_cast<std::size_t>(d)] << ' ';
      out << z.t << ' ';
    }
    out << a.mass << '\n';
  }
}

void CarlesonParams::validate(int m) const {
  if (static_cast<int>(r.size()) != m || static_cast<int>(tau.size()) != m)
    throw ParameterError("carleson: r and tau need one entry per factor");
  for (double x : tau)
    if (!(x > 0.0)) throw ParameterError("carleson: tau must be positive");
  for (double x : r)
    if (!std::isfinite(x)) throw ParameterError("carleson: r must be finite");
}

bool CarlesonParams::star_hypothesis(int n) const {
  return std::all_of(r.begin(), r.end(), [n](double x) { return x > n; });
}

namespace {

HPoint with(const HPoint& base, double t) {
  HPoint z = base;
  z.t = t;
  return z;
}

// candidate points for a single factor around one atom location
std::vector<HPoint> around(const HPoint& z, const CandidateOptions& opt) {
  std::vector<double> heights;
  const int hs = std::max(1, opt.height_steps);
  for (int i = 0; i <= hs; ++i) heights.push_back(2.0 * z.t / 3.0 * std::pow(3.0, double(i) / hs));
  const double lo = 2.0 * z.t / 3.0, hi = 2.0 * z.t;
  for (int j = static_cast<int>(std::ceil(std::log2(lo))); std::ldexp(1.0, j) <= hi; ++j)
    heights.push_back(std::ldexp(1.0, j));

  const int ss = std::max(0, opt.shift_steps);
  const int per = 2 * ss + 1;
  int combos = 1;
  for (int d = 0; d < z.n; ++d) combos *= per;

  std::vector<HPoint> out;
  for (double s : heights) {
    for (int c = 0; c < combos; ++c) {
      HPoint w = with(z, s);
      int code = c;
      for (int d = 0; d < z.n; ++d) {
        const int j = code % per - ss;
        code /= per;
        if (ss > 0) w.x[static_cast<std::size_t>(d)] += j * (s / 2) / ss;
      }
      out.push_back(w);
    }
  }
  return out;
}

// smallest cube around the midpoint of a and b holding both, if its center
// height keeps both atoms inside
bool pair_point(const HPoint& a, const HPoint& b, HPoint& w) {
  double dx = 0.0;
  w = a;
  for (int d = 0; d < a.n; ++d) {
    const auto i = static_cast<std::size_t>(d);
    w.x[i] = 0.5 * (a.x[i] + b.x[i]);
    dx = std::max(dx, std::abs(a.x[i] - b.x[i]));
  }
  const double s = std::max(dx, 2.0 * std::max(a.t, b.t) / 3.0);
  if (s > 2.0 * std::min(a.t, b.t)) return false;
  w.t = s;
  return true;
}

void product(const std::vector<std::vector<HPoint>>& lists, std::vector<Candidate>& out) {
  std::size_t total = 1;
  for (const auto& l : lists) total *= l.size();
  for (std::size_t c = 0; c < total; ++c) {
    Candidate cand;
    std::size_t code = c;
    for (const auto& l : lists) {
      cand.push_back(l[code % l.size()]);
      code /= l.size();
    }
    out.push_back(std::move(cand));
  }
}

template <class Fn>
CarlesonResult maximize(const DiscreteMeasure& mu, std::span<const Candidate> candidates, Fn&& value_and_count) {
  std::vector<double> vals(candidates.size(), 0.0);
  std::vector<std::size_t> used(candidates.size(), 0);
  ordered_sum(candidates.size(), [&](std::size_t i) {
    if (static_cast<int>(candidates[i].size()) != mu.m()) throw ParameterError("carleson: candidate has wrong m");
    auto [v, u] = value_and_count(candidates[i]);
    vals[i] = v;
    used[i] = u;
    return 0.0;
  });
  CarlesonResult res;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] > res.value || res.argmax.empty()) {
      res.value = vals[i];
      res.argmax = candidates[i];
      res.atoms_used = used[i];
    }
  }
  return res;
}

}  // namespace

std::vector<Candidate> generate_candidates(const DiscreteMeasure& mu, const CandidateOptions& opt) {
  std::vector<Candidate> out;
  const auto& atoms = mu.atoms();
  for (const auto& a : atoms) {
    std::vector<std::vector<HPoint>> lists;
    for (const auto& z : a.points) lists.push_back(around(z, opt));
    product(lists, out);
  }
  if (opt.pairs) {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      for (std::size_t j = i + 1; j < atoms.size(); ++j) {
        Candidate c;
        bool ok = true;
        for (int f = 0; f < mu.m() && ok; ++f) {
          HPoint w;
          ok = pair_point(atoms[i].points[static_cast<std::size_t>(f)], atoms[j].points[static_cast<std::size_t>(f)], w);
          c.push_back(w);
        }
        if (ok) out.push_back(std::move(c));
      }
    }
  }
  return out;
}

bool in_closed_cube(const Cube& q, const HPoint& z) {
  const double slack = 1e-12 * q.side;
  for (int i = 0; i <= q.n; ++i) {
    const double c = z.coord(i);
    if (c < q.lower(i) - slack || c > q.upper(i) + slack) return false;
  }
  return true;
}

CarlesonResult carleson_norm(const DiscreteMeasure& mu, const CarlesonParams& params,
                             std::span<const Candidate> candidates) {
  params.validate(mu.m());
  if (candidates.empty()) throw ParameterError("carleson_norm: empty candidate list");
  return maximize(mu, candidates, [&](const Candidate& w) {
    std::vector<Cube> cubes;
    double denom = 1.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      cubes.push_back(carleson_cube(w[j]));
      denom *= std::pow(w[j].t, params.r[j]);
    }
    double mass = 0.0;
    std::size_t count = 0;
    for (const auto& a : mu.atoms()) {
      bool in = true;
      for (std::size_t j = 0; j < cubes.size() && in; ++j) in = in_closed_cube(cubes[j], a.points[j]);
      if (in) {
        mass += a.mass;
        ++count;
      }
    }
    return std::pair{mass / denom, count};
  });
}

CarlesonResult carleson_norm(const DiscreteMeasure& mu, const CarlesonParams& params) {
  const auto c = generate_candidates(mu);
  return carleson_norm(mu, params, c);
}

namespace {

double star_term(const Atom& a, const Candidate& w, const CarlesonParams& p, bool global) {
  double v = a.mass;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const HPoint& z = a.points[j];
    if (!global && !in_truncated_halfspace(w[j], z)) return 0.0;
    v *= std::pow(z.t, p.tau[j]) / std::pow(reflected_distance(z, w[j]), p.r[j] + p.tau[j]);
  }
  return v;
}

}  // namespace

CarlesonResult carleson_star(const DiscreteMeasure& mu, const CarlesonParams& params,
                             std::span<const Candidate> candidates, bool global) {
  params.validate(mu.m());
  if (candidates.empty()) throw ParameterError("carleson_star: empty candidate list");
  return maximize(mu, candidates, [&](const Candidate& w) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& a : mu.atoms()) {
      const double v = star_term(a, w, params, global);
      if (v > 0.0) ++count;
      sum += v;
    }
    return std::pair{sum, count};
  });
}

CarlesonResult carleson_star(const DiscreteMeasure& mu, const CarlesonParams& params, bool global) {
  const auto c = generate_candidates(mu);
  return carleson_star(mu, params, c, global);
}

DiscreteMeasure counterexample_measure(int k_atoms) {
  DiscreteMeasure mu(1, 1);
  for (int k = 1; k <= k_atoms; ++k) mu.add(HPoint(0.0, std::ldexp(1.0, k)), std::ldexp(1.0, 2 * k));
  return mu;
}

Counterexample counterexample_partial_sums(int k_atoms, int k_height) {
  if (k_height < 1 || k_atoms < k_height) throw ParameterError("counterexample: need K_atoms >= K_height >= 1");
  const DiscreteMeasure mu = counterexample_measure(k_atoms);
  const CarlesonParams p{{2.0}, {1.0}};
  const std::vector<Candidate> w = {{HPoint(0.0, std::ldexp(1.0, k_height))}};
  Counterexample out;
  out.restricted = carleson_star(mu, p, w).value;
  double run = 0.0;
  for (const auto& a : mu.atoms()) {
    run += star_term(a, w[0], p, true);
    out.global.push_back(run);
  }
  return out;
}

double mh_sup(const Weight& v, double p, std::span<const Cube> cubes, int order, int subdivisions) {
  if (!(p > 1.0)) throw ParameterError("mh_sup: p must exceed 1");
  if (cubes.empty()) throw ParameterError("mh_sup: no cubes");
  const double q = p / (p - 1.0);
  auto checked = [&](const HPoint& z) {
    const double x = v(z);
    if (!(x > 0.0)) throw DomainError("mh_sup: weight must be positive");
    return x;
  };
  double best = 0.0;
  for (const auto& c : cubes) {
    const Box b = Box::from_cube(c);
    const double vol = c.volume();
    const double av = integrate_box(checked, b, order, subdivisions) / vol;
    const double ai =
        integrate_box([&](const HPoint& z) { return std::pow(checked(z), -q / p); }, b, order, subdivisions) / vol;
    best = std::max(best, av * std::pow(ai, p / q));
  }
  return best;
}

namespace {
using CellKey = std::pair<int, std::array<std::int64_t, kMaxDim>>;
}

double whitney_carleson_check(const DiscreteMeasure& mu, double theta, std::span<const WhitneyCell> window) {
  if (window.empty()) throw ParameterError("whitney_carleson_check: empty window");
  if (mu.m() != 1) throw ParameterError("whitney_carleson_check: m must be 1");
  std::map<CellKey, double> mass;
  for (const auto& a : mu.atoms()) {
    const WhitneyCell c = whitney_cell_containing(a.points[0]);
    mass[{c.layer, c.lattice}] += a.mass;
  }
  double best = 0.0;
  for (const auto& c : window) {
    auto it = mass.find({c.layer, c.lattice});
    if (it == mass.end()) continue;
    best = std::max(best, it->second / std::pow(c.eta(), theta));
  }
  return best;
}

DiscreteMeasure atomize_weighted(std::span<const WhitneyCell> window, double lambda) {
  if (window.empty()) throw ParameterError("atomize_weighted: empty window");
  DiscreteMeasure mu(window.front().center.n, 1);
  for (const auto& c : window) mu.add(c.center, weighted_box_measure(c.cube, WeightSpec{lambda}));
  return mu;
}

}  // namespace hsl
