#include "hsl/halfspace.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hsl/errors.hpp"

namespace hsl {

namespace {

constexpr std::size_t kMaxCellsListed = 20'000'000;

// Interval of lattice indices i with (i*h, (i+1)*h) meeting (lo, hi).
std::pair<std::int64_t, std::int64_t> open_overlap_range(double lo, double hi, double h) {
  const auto first = static_cast<std::int64_t>(std::floor(lo / h));
  const auto last = static_cast<std::int64_t>(std::ceil(hi / h)) - 1;
  return {first, last};
}

}  // namespace

void validate(const HPoint& z) {
  if (z.n < 1 || z.n > kMaxDim) throw DomainError("dimension n must be 1, 2 or 3");
  if (!(z.t > 0.0)) throw DomainError("point height must be positive, got " + std::to_string(z.t));
}

double horizontal_distance_sq(const HPoint& z, const HPoint& w) {
  double d2 = 0.0;
  for (int i = 0; i < z.n; ++i) {
    const double d = z.x[static_cast<std::size_t>(i)] - w.x[static_cast<std::size_t>(i)];
    d2 += d * d;
  }
  return d2;
}

double reflected_distance(const HPoint& z, const HPoint& w) {
  const double u = z.t + w.t;
  return std::sqrt(horizontal_distance_sq(z, w) + u * u);
}

double distance(const HPoint& z, const HPoint& w) {
  const double u = z.t - w.t;
  return std::sqrt(horizontal_distance_sq(z, w) + u * u);
}

bool Cube::contains(const HPoint& z) const {
  for (int i = 0; i <= n; ++i) {
    const double c = z.coord(i);
    if (c < lower(i) || c > upper(i)) return false;
  }
  return true;
}

double Cube::volume() const { return std::pow(side, n + 1); }

Box Box::from_cube(const Cube& c) {
  Box b;
  b.n = c.n;
  for (int i = 0; i <= c.n; ++i) {
    b.lo[static_cast<std::size_t>(i)] = c.lower(i);
    b.hi[static_cast<std::size_t>(i)] = c.upper(i);
  }
  return b;
}

bool Box::contains(const HPoint& z) const {
  for (int i = 0; i <= n; ++i) {
    const double c = z.coord(i);
    if (c < lo[static_cast<std::size_t>(i)] || c > hi[static_cast<std::size_t>(i)]) return false;
  }
  return true;
}

Cube carleson_cube(const HPoint& w) {
  validate(w);
  Cube q;
  q.n = w.n;
  for (int i = 0; i < w.n; ++i) q.center[static_cast<std::size_t>(i)] = w.x[static_cast<std::size_t>(i)];
  q.center[static_cast<std::size_t>(w.n)] = w.t;
  q.side = w.t;
  return q;
}

bool WhitneyCell::operator==(const WhitneyCell& o) const {
  if (layer != o.layer || cube.n != o.cube.n) return false;
  for (int i = 0; i < cube.n; ++i)
    if (lattice[static_cast<std::size_t>(i)] != o.lattice[static_cast<std::size_t>(i)]) return false;
  return true;
}

WhitneyCell make_whitney_cell(int n, int layer, const std::array<std::int64_t, kMaxDim>& lattice) {
  if (n < 1 || n > kMaxDim) throw DomainError("dimension n must be 1, 2 or 3");
  WhitneyCell c;
  c.layer = layer;
  c.lattice = lattice;
  const double h = std::ldexp(1.0, -layer);
  c.cube.n = n;
  c.cube.side = h;
  c.center.n = n;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    c.cube.center[ui] = (static_cast<double>(lattice[ui]) + 0.5) * h;
    c.center.x[ui] = c.cube.center[ui];
  }
  c.cube.center[static_cast<std::size_t>(n)] = 1.5 * h;
  c.center.t = 1.5 * h;
  return c;
}

WhitneyCell whitney_cell_containing(const HPoint& z) {
  validate(z);
  int e = 0;
  std::frexp(z.t, &e);  // t in [2^{e-1}, 2^e)
  const int layer = 1 - e;
  const double h = std::ldexp(1.0, -layer);
  std::array<std::int64_t, kMaxDim> lattice{};
  for (int i = 0; i < z.n; ++i) {
    const double q = z.x[static_cast<std::size_t>(i)] / h;  // exact: h is a power of two
    lattice[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::ceil(q)) - 1;
  }
  return make_whitney_cell(z.n, layer, lattice);
}

Cube enlarged_cell(const WhitneyCell& cell) {
  Cube c = cell.cube;
  c.side *= 1.25;
  return c;
}

std::vector<WhitneyCell> cells_covering(const Cube& region, std::optional<int> max_layer) {
  const int n = region.n;
  if (n < 1 || n > kMaxDim) throw DomainError("dimension n must be 1, 2 or 3");
  if (!(region.side > 0.0)) throw DomainError("region side must be positive");
  const double a = std::max(region.t_min(), 0.0);
  const double b = region.t_max();
  std::vector<WhitneyCell> out;
  if (b <= 0.0) return out;

  // Layer k has open height range (2^{-k}, 2^{1-k}); it meets (a, b) iff
  // 2^{-k} < b and 2^{1-k} > a.
  const int k_min = static_cast<int>(std::floor(-std::log2(b))) + 1;
  int k_max;
  if (a > 0.0) {
    k_max = static_cast<int>(std::ceil(1.0 - std::log2(a))) - 1;
    if (max_layer) k_max = std::min(k_max, *max_layer);
  } else {
    if (!max_layer) throw CapacityError("region reaches t = 0 and no layer cap was given");
    k_max = *max_layer;
  }

  for (int k = k_min - 1; k <= k_max + 1; ++k) {
    if (max_layer && k > *max_layer) break;
    const double h = std::ldexp(1.0, -k);
    if (!(h < b && 2.0 * h > a)) continue;
    std::array<std::pair<std::int64_t, std::int64_t>, kMaxDim> ranges{};
    double count = 1.0;
    for (int i = 0; i < n; ++i) {
      ranges[static_cast<std::size_t>(i)] = open_overlap_range(region.lower(i), region.upper(i), h);
      const auto& r = ranges[static_cast<std::size_t>(i)];
      count *= static_cast<double>(std::max<std::int64_t>(0, r.second - r.first + 1));
    }
    if (static_cast<double>(out.size()) + count > static_cast<double>(kMaxCellsListed))
      throw CapacityError("cell enumeration exceeds capacity");
    std::array<std::int64_t, kMaxDim> idx{};
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = ranges[static_cast<std::size_t>(i)].first;
    if (count == 0.0) continue;
    // Odometer over the lattice box, last axis fastest: lexicographic order.
    while (true) {
      out.push_back(make_whitney_cell(n, k, idx));
      int axis = n - 1;
      while (axis >= 0) {
        auto ua = static_cast<std::size_t>(axis);
        if (++idx[ua] <= ranges[ua].second) break;
        idx[ua] = ranges[ua].first;
        --axis;
      }
      if (axis < 0) break;
    }
  }
  return out;
}

double weighted_box_measure(const Cube& box, WeightSpec w) {
  const double lo = box.t_min();
  const double hi = box.t_max();
  if (lo < 0.0) throw DomainError("box extends below t = 0");
  const double base = std::pow(box.side, box.n);
  const double lam = w.lambda;
  if (lam <= -1.0 && lo == 0.0)
    throw DivergenceError("m_lambda of a box touching t = 0 diverges for lambda <= -1");
  if (lam == -1.0) return base * std::log(hi / lo);
  return base * (std::pow(hi, lam + 1.0) - std::pow(lo, lam + 1.0)) / (lam + 1.0);
}

bool in_truncated_halfspace(const HPoint& w_ref, const HPoint& z) { return z.t <= 3.0 * w_ref.t; }

std::vector<int> truncated_layers_containing(double t, double s) {
  if (!(t > 0.0) || !(s > 0.0)) throw DomainError("heights must be positive");
  std::vector<int> out;
  // 2^{-k} s <= t < 3 * 2^{-k} s  <=>  log2(s/(3t)) < k <= log2(s/t)
  const int hi = static_cast<int>(std::floor(std::log2(s / t))) + 1;
  for (int k = std::max(0, hi - 3); k <= std::max(0, hi); ++k) {
    const double lo_edge = std::ldexp(s, -k);
    if (lo_edge <= t && t < 3.0 * lo_edge) out.push_back(k);
  }
  return out;
}

}  // namespace hsl
