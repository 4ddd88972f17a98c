#pragma once

// Points, cubes and the dyadic Whitney decomposition of the upper half-space
// H = {(x, t) : x in R^n, t > 0}, n in {1, 2, 3}.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace hsl {

inline constexpr int kMaxDim = 3;

/// Point z = (x, t) of the upper half-space.
struct HPoint {
  int n = 1;
  std::array<double, kMaxDim> x{};
  double t = 1.0;

  HPoint() = default;
  HPoint(double x1, double t_) : n(1), x{x1, 0.0, 0.0}, t(t_) {}
  HPoint(double x1, double x2, double t_) : n(2), x{x1, x2, 0.0}, t(t_) {}
  HPoint(double x1, double x2, double x3, double t_) : n(3), x{x1, x2, x3}, t(t_) {}

  /// Coordinate i of the (n+1)-vector (x_1, ..., x_n, t).
  double coord(int i) const { return i < n ? x[static_cast<std::size_t>(i)] : t; }
  void set_coord(int i, double v) {
    if (i < n) x[static_cast<std::size_t>(i)] = v;
    else t = v;
  }
};

/// Throws DomainError unless t > 0 and 1 <= n <= 3.
void validate(const HPoint& z);

/// |x - y|^2 for the horizontal parts.
double horizontal_distance_sq(const HPoint& z, const HPoint& w);

/// |z - w_bar| where w_bar = (y, -s) is the reflection of w.
double reflected_distance(const HPoint& z, const HPoint& w);

/// Euclidean distance |z - w|.
double distance(const HPoint& z, const HPoint& w);

/// Closed axis-parallel cube in R^{n+1}; the last coordinate is the height.
struct Cube {
  int n = 1;
  std::array<double, kMaxDim + 1> center{};
  double side = 1.0;

  double lower(int i) const { return center[static_cast<std::size_t>(i)] - side / 2; }
  double upper(int i) const { return center[static_cast<std::size_t>(i)] + side / 2; }
  double t_min() const { return lower(n); }
  double t_max() const { return upper(n); }
  bool contains(const HPoint& z) const;
  double volume() const;
};

/// Box with explicit per-axis bounds; used for the truncation region and
/// for non-cubical quadrature panels.
struct Box {
  int n = 1;
  std::array<double, kMaxDim + 1> lo{};
  std::array<double, kMaxDim + 1> hi{};

  static Box from_cube(const Cube& c);
  bool contains(const HPoint& z) const;
};

/// Cube Q_w centered at w with side equal to the height of w.
Cube carleson_cube(const HPoint& w);

/// Cell of the dyadic Whitney decomposition. Layer k covers heights
/// [2^{-k}, 2^{-k+1}] and is tiled by closed cubes of side 2^{-k} anchored at
/// the origin lattice.
struct WhitneyCell {
  int layer = 0;
  std::array<std::int64_t, kMaxDim> lattice{};
  Cube cube;
  HPoint center;

  double side() const { return cube.side; }
  double eta() const { return center.t; }
  bool operator==(const WhitneyCell& o) const;
};

WhitneyCell make_whitney_cell(int n, int layer, const std::array<std::int64_t, kMaxDim>& lattice);

/// Cell whose closed cube contains z. Ties on shared faces go to the smaller
/// layer, then to the lexicographically smallest lattice index.
WhitneyCell whitney_cell_containing(const HPoint& z);

/// Same center, side multiplied by 5/4.
Cube enlarged_cell(const WhitneyCell& cell);

/// Cells whose cube interiors meet the interior of `region`, restricted to
/// layer <= max_layer, ordered by (layer, lattice). A region touching t = 0
/// needs a layer cap; otherwise CapacityError.
std::vector<WhitneyCell> cells_covering(const Cube& region, std::optional<int> max_layer);

/// Weight t^lambda of dm_lambda = t^lambda dx dt.
struct WeightSpec {
  double lambda = 0.0;
};

/// m_lambda(box) in closed form.
double weighted_box_measure(const Cube& box, WeightSpec w);

/// True iff z lies in H_{w_ref} = {z : t <= 3 * height(w_ref)}.
bool in_truncated_halfspace(const HPoint& w_ref, const HPoint& z);

/// Layers k >= 0 of the partition H_{k,s} = {2^{-k}s <= t < 3 * 2^{-k}s}
/// that contain height t (at most two, since consecutive layers overlap).
std::vector<int> truncated_layers_containing(double t, double s);

}  // namespace hsl
