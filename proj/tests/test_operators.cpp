#include <doctest.h>

#include <cmath>
#include <random>

#include "hsl/errors.hpp"
#include "hsl/kernels.hpp"
#include "hsl/operators.hpp"

using namespace hsl;

TEST_CASE("trace") {
  auto g = TestFunction::poisson_shift(1, 1.0);
  auto h = TestFunction::derivative_kernel(HPoint(0.3, 0.5), 2);
  const HPoint z(0.2, 0.7);
  CHECK(trace_eval(g, z) == g(z));
  CHECK(trace_eval(TestFunction::product({g, h}), z) == doctest::Approx(g(z) * h(z)).epsilon(1e-15));
  CHECK(trace_eval([](std::span<const HPoint> zs) { return zs[0].t * zs[1].t * zs[2].x[0]; }, 3, z) ==
        doctest::Approx(0.7 * 0.7 * 0.2));
}

TEST_CASE("reproducing formula") {
  auto f = TestFunction::poisson_shift(1, 1.0);
  for (HPoint z : {HPoint(0.0, 1.0), HPoint(0.5, 0.25), HPoint(-2.0, 3.0)}) {
    auto r = reproduce(f, 1, z, {2.0, 0.0});
    const double ex = f(z);
    CHECK(!r.flagged());
    CHECK(std::abs(r.value - ex) < 1e-2 * ex);
    for (std::size_t l = 1; l < r.levels.size(); ++l)
      CHECK(std::abs(r.levels[l] - ex) <= 0.5 * std::abs(r.levels[l - 1] - ex));
  }
  CHECK(reproduce(f.scaled(0.0), 1, HPoint(0.0, 1.0)).value == 0.0);
  // k = 0 with p = 1, alpha = 0.5 misses k > (alpha + 1)/p - 1
  auto flagged = reproduce(f, 0, HPoint(0.0, 1.0), {1.0, 0.5}, HalfspaceQuadSpec::coarse());
  CHECK(flagged.flagged());
  CHECK(reproduce_hypothesis({0.5, 0.0}, 1, 2));
  CHECK(!reproduce_hypothesis({0.5, 0.0}, 1, 1));
}

TEST_CASE("expanded projection S") {
  // indicator of the Whitney cell [0,1] x [1,2]; a = 0, m = 1
  const WhitneyCell cell = make_whitney_cell(1, 0, {0, 0, 0});
  auto ind = [&](const HPoint& w) { return cell.cube.contains(w) ? 1.0 : 0.0; };
  const HPoint z(0.3, 0.4);
  const double b = 2.5;
  VecExponents e{{0.0}, {b}};
  auto r = s_expanded(e, ind, 1, std::span<const HPoint>(&z, 1));
  const double direct = integrate_box([&](const HPoint& w) { return std::pow(w.t, b - 2.0) / std::pow(reflected_distance(z, w), b); },
                                      Box::from_cube(cell.cube), 16, 4);
  CHECK(r.value == doctest::Approx(direct).epsilon(1e-8));

  auto zero = [](const HPoint&) { return 0.0; };
  CHECK(s_expanded(e, zero, 1, std::span<const HPoint>(&z, 1)).value == 0.0);

  auto f = TestFunction::poisson_shift(1, 1.0);
  const std::vector<HPoint> zs = {HPoint(0.0, 1.0), HPoint(1.0, 0.5)};
  auto two = s_expanded({{1.0, 0.5}, {1.5, 1.5}}, [&](const HPoint& w) { return f(w); }, 1, zs, HalfspaceQuadSpec::coarse());
  CHECK(two.value > 0.0);
}

TEST_CASE("cell operators") {
  const WhitneyCell cell = make_whitney_cell(1, 1, {3, 0, 0});
  auto one = [](const HPoint&) { return 1.0; };
  const HPoint c = cell.center;
  const double a = 1.0, b = 0.5;
  const double v = s_cell(a, b, cell, one, c);
  const double direct = std::pow(c.t, a) * integrate_box([&](const HPoint& w) { return 1.0 / std::pow(reflected_distance(c, w), 2 + a + b); },
                                                        Box::from_cube(cell.cube), 16, 4, WeightSpec{b});
  CHECK(v > 0.0);
  CHECK(v == doctest::Approx(direct).epsilon(1e-6));
  CHECK(s_cell(a, b, cell, [](const HPoint&) { return 0.0; }, c) == 0.0);
  CHECK(s_tilde(a, b, one, c) == doctest::Approx(v).epsilon(1e-15));

  // decay across translated cells
  const HPoint z(0.0, 1.5);
  std::vector<double> logd, logv;
  for (int j = 4; j <= 9; ++j) {
    const std::int64_t shift = std::int64_t{1} << j;
    const WhitneyCell far = make_whitney_cell(1, 0, {shift, 0, 0});
    logd.push_back(std::log(reflected_distance(z, far.center)));
    logv.push_back(std::log(s_cell(a, b, far, one, z)));
  }
  const double slope = (logv.back() - logv.front()) / (logd.back() - logd.front());
  CHECK(slope == doctest::Approx(-(2 + a + b)).epsilon(0.05));
}

TEST_CASE("R operators") {
  auto f = TestFunction::poisson_shift(1, 1.0);
  const HalfspaceQuadSpec s = HalfspaceQuadSpec::coarse();
  const HPoint w(0.2, 0.8);
  const double a = 1.0, b = 2.0;
  auto g = [&](std::span<const HPoint> zs) { return f(zs[0]); };
  auto r = r_expanded({{a}, {b}}, g, 1, w, s);
  // R_{a,b} g(w) = s^{-n-1} S_{b,a}[g t^{n+1}](w)
  auto sv = s_expanded({{b}, {a}}, [&](const HPoint& z) { return f(z) * z.t * z.t; }, 1, std::span<const HPoint>(&w, 1), s);
  CHECK(r.value > 0.0);
  CHECK(r.value == doctest::Approx(std::pow(w.t, -2.0) * sv.value).epsilon(1e-10));
  CHECK(r_expanded({{a}, {b}}, [](std::span<const HPoint>) { return 0.0; }, 1, w, s).value == 0.0);

  // m = 1 R_k is the reproducing formula
  auto rk = r_k(1, g, 1, 1, w, s);
  CHECK(rk.value == doctest::Approx(reproduce(f, 1, w, {}, s).value).epsilon(1e-12));
  CHECK(r_k(1, [](std::span<const HPoint>) { return 0.0; }, 1, 1, w, s).value == 0.0);
}

TEST_CASE("R_k reproduces on the diagonal for m = 2") {
  auto f = TestFunction::poisson_shift(1, 1.0);
  auto g = [&](std::span<const HPoint> zs) { return f(zs[0]) * f(zs[1]); };
  const HPoint w(0.0, 1.0);
  auto r = r_k(2, g, 1, 2, w);
  const double ex = std::pow(poisson_h(HPoint(0.0, 2.0)), 2);
  CHECK(std::abs(r.value - ex) < 3e-2 * ex);
}

TEST_CASE("extension") {
  CHECK(extension_order(2.0, 1, std::vector<double>{0.0, 0.0}) == 1);
  CHECK(extension_order(2.0, 2, std::vector<double>{0.5, 0.0}) == 2);
  auto g = TestFunction::poisson_shift(1, 1.0);
  const HalfspaceQuadSpec s = HalfspaceQuadSpec::coarse();
  const HPoint z(0.4, 0.6);
  const std::vector<HPoint> same = {z, z};
  CHECK(extend(g, 1, same, s).value == doctest::Approx(reproduce(g, 1, z, {}, s).value).epsilon(1e-14));

  const Extension ext(g, 1, HalfspaceQuadSpec{}.at_level(2));
  for (HPoint p : {HPoint(0.0, 1.0), HPoint(0.5, 0.3), HPoint(-1.0, 2.0), HPoint(2.0, 0.7), HPoint(0.1, 4.0)}) {
    const std::vector<HPoint> diag = {p, p};
    CHECK(std::abs(ext(diag) - g(p)) < 3e-2 * std::abs(g(p)));
    const std::vector<HPoint> off = {p, HPoint(p.x[0] + 0.5, p.t * 1.5)};
    CHECK(ext.harmonicity_residual(off, 0) < 1e-4);
    CHECK(ext.harmonicity_residual(off, 1) < 1e-4);
  }
}

TEST_CASE("elementary sum lemma") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(1e-3, 1.0);
  std::uniform_int_distribution<int> len(2, 20), mm(1, 3);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = mm(rng), L = len(rng);
    const double p = 0.5 + 3.0 * u(rng);
    std::vector<std::vector<double>> x(static_cast<std::size_t>(m));
    std::vector<double> q;
    for (auto& xi : x) {
      for (int k = 0; k < L; ++k) xi.push_back(u(rng));
      q.push_back(p * u(rng));
    }
    const auto s = elementary_sum(x, p, q);
    if (!(s.lhs <= s.rhs)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("calibration protocol") {
  const std::vector<double> train = {0.5, 1.0, 0.8};
  CHECK(calibrate(train, std::vector<double>{1.4}).pass);
  CHECK(!calibrate(train, std::vector<double>{1.6}).pass);
  CHECK(calibrate(train, std::vector<double>{1.4}).constant == doctest::Approx(1.5));
}

TEST_CASE("cell windows and S~ boundedness sums") {
  CHECK(cell_window(1, 0, 1.0).size() == 2);
  CHECK(cell_window(2, 0, 1.0).size() == 4);
  const auto win = cell_window(1, 6, 4.0);
  for (const auto& c : win) CHECK(std::abs(c.layer) <= 6);
  auto f = TestFunction::derivative_kernel(HPoint(0.0, 0.5), 2);
  auto w = s_tilde_window(1.0, 0.0, 2.0, 1.0, 0.5, [&](const HPoint& z) { return f(z); }, win);
  CHECK(w.lhs > 0.0);
  CHECK(std::isfinite(w.lhs / w.rhs));
}

TEST_CASE("discrete comparability of D_k and D_k*") {
  auto f = TestFunction::poisson_shift(1, 0.5);
  auto u = [&](const HPoint& z) { return std::pow(std::abs(f(z)), 2.0); };
  const auto small = comparability_sums(u, 0.5, 1.5, cell_window(1, 4, 4.0));
  const auto big = comparability_sums(u, 0.5, 1.5, cell_window(1, 5, 8.0));
  CHECK(small.enlarged >= small.plain);
  const double r1 = small.enlarged / small.plain, r2 = big.enlarged / big.plain;
  CHECK(r2 == doctest::Approx(r1).epsilon(0.1));
}
