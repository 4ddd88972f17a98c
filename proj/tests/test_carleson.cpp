#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hsl/carleson.hpp"
#include "hsl/errors.hpp"
#include "hsl/operators.hpp"

using namespace hsl;

namespace {

DiscreteMeasure random_measure(std::mt19937_64& rng, int n, int m, int atoms) {
  std::uniform_real_distribution<double> x(-2.0, 2.0), lt(-3.0, 2.0), ms(0.1, 2.0);
  DiscreteMeasure mu(n, m);
  for (int a = 0; a < atoms; ++a) {
    Atom at;
    for (int j = 0; j < m; ++j) {
      HPoint z;
      z.n = n;
      for (int d = 0; d < n; ++d) z.x[static_cast<std::size_t>(d)] = x(rng);
      z.t = std::exp2(lt(rng));
      at.points.push_back(z);
    }
    at.mass = ms(rng);
    mu.add(at);
  }
  return mu;
}

}  // namespace

TEST_CASE("MH weights") {
  std::vector<Cube> cubes;
  for (int j = -4; j <= 4; ++j) cubes.push_back(carleson_cube(HPoint(0.3 * j, std::exp2(j))));
  CHECK(mh_sup([](const HPoint&) { return 1.0; }, 2.0, cubes) == doctest::Approx(1.0).epsilon(1e-14));
  // (avg t)(avg 1/t) on t in [s/2, 3s/2]
  for (const auto& c : cubes) {
    const std::vector<Cube> one = {c};
    CHECK(mh_sup([](const HPoint& z) { return z.t; }, 2.0, one) == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  }
  for (double alpha : {-1.0, 0.5, 2.0}) {
    for (double p : {1.5, 2.0, 3.0}) {
      std::vector<Cube> a, b;
      for (int i = 0; i < 50; ++i) {
        const HPoint w(0.25 * (i % 7), std::exp2(i % 10 - 5));
        a.push_back(carleson_cube(w));
        b.push_back(carleson_cube(HPoint(2 * w.x[0], 2 * w.t)));
      }
      auto v = [alpha](const HPoint& z) { return std::pow(z.t, alpha); };
      const double sa = mh_sup(v, p, a), sb = mh_sup(v, p, b);
      CHECK(std::isfinite(sa));
      CHECK(sb == doctest::Approx(sa).epsilon(1e-8));
    }
  }
  const std::vector<Cube> one = {carleson_cube(HPoint(0.0, 1.0))};
  CHECK_THROWS_AS(mh_sup([](const HPoint& z) { return z.t - 1.0; }, 2.0, one), DomainError);
  CHECK_THROWS_AS(mh_sup([](const HPoint&) { return 1.0; }, 1.0, one), ParameterError);
}

TEST_CASE("Carleson norm of a point mass") {
  DiscreteMeasure mu(1, 1);
  mu.add(HPoint(0.0, 1.0), 1.0);
  const CarlesonParams p{{1.0}, {1.0}};
  auto r = carleson_norm(mu, p);
  CHECK(r.value == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(r.argmax[0].t == doctest::Approx(2.0 / 3.0));
  CHECK(r.atoms_used == 1);
  // brute force over s in the containment window [2/3, 2]
  double best = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double s = 2.0 / 3.0 + (2.0 - 2.0 / 3.0) * i / 100000.0;
    best = std::max(best, 1.0 / s);
  }
  CHECK(r.value == doctest::Approx(best).epsilon(1e-12));

  const std::vector<Candidate> far = {{HPoint(10.0, 1.0)}};
  CHECK(carleson_norm(mu, p, far).value == 0.0);
  CHECK(carleson_norm(mu.scaled(3.0), p).value == doctest::Approx(4.5).epsilon(1e-14));
  const std::vector<Candidate> none;
  CHECK_THROWS_AS(carleson_norm(mu, p, none), ParameterError);
}

TEST_CASE("star norm") {
  DiscreteMeasure mu(1, 1);
  mu.add(HPoint(0.0, 1.0), 1.0);
  const CarlesonParams p{{2.0}, {1.0}};
  const std::vector<Candidate> w = {{HPoint(0.0, 1.0)}};
  CHECK(carleson_star(mu, p, w).value == doctest::Approx(0.125).epsilon(1e-15));
  // atom above 3s for every candidate
  const std::vector<Candidate> low = {{HPoint(0.0, 0.1)}, {HPoint(1.0, 0.2)}};
  CHECK(carleson_star(mu, p, low).value == 0.0);
  CHECK(carleson_star(mu, p, low, true).value > 0.0);
}

TEST_CASE("monotone in the measure") {
  std::mt19937_64 rng(11);
  for (int m : {1, 2}) {
    auto mu = random_measure(rng, 1, m, 8);
    const CarlesonParams p{std::vector<double>(static_cast<std::size_t>(m), 2.0),
                           std::vector<double>(static_cast<std::size_t>(m), 1.0)};
    const auto cands = generate_candidates(mu);
    const double n0 = carleson_norm(mu, p, cands).value, s0 = carleson_star(mu, p, cands).value;
    auto more = mu;
    const auto extra = random_measure(rng, 1, m, 3);
    for (const auto& a : extra.atoms()) more.add(a);
    CHECK(carleson_norm(more, p, cands).value >= n0);
    CHECK(carleson_star(more, p, cands).value >= s0);
  }
}

TEST_CASE("norm and star norm are comparable") {
  std::mt19937_64 rng(5);
  double lo = 1e300, hi = 0.0, lo2 = 1e300, hi2 = 0.0;
  for (int i = 0; i < 10; ++i) {
    auto mu = random_measure(rng, 1, 1, 6 + i);
    const CarlesonParams p{{2.0}, {1.0}};
    CHECK(p.star_hypothesis(1));
    const double a = carleson_norm(mu, p).value, b = carleson_star(mu, p).value;
    CandidateOptions dense;
    dense.height_steps = 8;
    dense.shift_steps = 2;
    const auto dc = generate_candidates(mu, dense);
    const double a2 = carleson_norm(mu, p, dc).value, b2 = carleson_star(mu, p, dc).value;
    CHECK(a > 0.0);
    lo = std::min(lo, b / a), hi = std::max(hi, b / a);
    lo2 = std::min(lo2, b2 / a2), hi2 = std::max(hi2, b2 / a2);
  }
  MESSAGE("star/norm in [" << lo << ", " << hi << "], dense [" << lo2 << ", " << hi2 << "]");
  CHECK(lo2 == doctest::Approx(lo).epsilon(0.1));
  CHECK(hi2 == doctest::Approx(hi).epsilon(0.1));
}

TEST_CASE("restricted versus global star sums") {
  std::vector<double> restricted;
  for (int kh = 4; kh <= 10; ++kh) restricted.push_back(counterexample_partial_sums(kh + 12, kh).restricted);
  for (double r : restricted) CHECK(r == doctest::Approx(restricted.front()).epsilon(1e-3));
  CHECK(restricted.front() < 1.0);

  const auto ce = counterexample_partial_sums(60, 6);
  const double bound = 10.0;
  CHECK(ce.global.back() > bound);
  // late increments approach one per atom
  CHECK(ce.global[59] - ce.global[58] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(ce.restricted == doctest::Approx(ce.global[6]).epsilon(1e-15));

  const auto mu = counterexample_measure(12);
  const double norm = carleson_norm(mu, CarlesonParams{{2.0}, {1.0}}).value;
  CHECK(std::isfinite(norm));
  CHECK(norm < 4.0);
  CHECK_THROWS_AS(counterexample_partial_sums(3, 4), ParameterError);
}

TEST_CASE("layers of the truncated half-space cover suite atoms") {
  std::mt19937_64 rng(3);
  auto mu = random_measure(rng, 1, 1, 40);
  const double s = 1.0;
  for (const auto& a : mu.atoms()) {
    const double t = a.points[0].t;
    CHECK((t <= 3 * s) == !truncated_layers_containing(t, s).empty());
  }
}

TEST_CASE("Whitney-cell condition") {
  const auto win = cell_window(1, 6, 2.0);
  for (double lambda : {0.0, 1.0, -0.5}) {
    const auto mu = atomize_weighted(win, lambda);
    double lo = 1e300, hi = 0.0;
    for (const auto& c : win) {
      const std::vector<WhitneyCell> one = {c};
      const double v = whitney_carleson_check(mu, 2.0 + lambda, one);
      lo = std::min(lo, v), hi = std::max(hi, v);
    }
    CHECK(hi == doctest::Approx(lo).epsilon(1e-8));
  }
  DiscreteMeasure single(1, 1);
  single.add(win[3].center, 1.0);
  int nonzero = 0;
  for (const auto& c : win) {
    const std::vector<WhitneyCell> one = {c};
    if (whitney_carleson_check(single, 1.0, one) > 0.0) ++nonzero;
  }
  CHECK(nonzero == 1);
  const auto mu = atomize_weighted(win, 0.0);
  double prev = 0.0;
  for (double theta : {0.0, 1.0, 2.0, 3.0}) {
    std::vector<WhitneyCell> small;
    for (const auto& c : win)
      if (c.eta() < 1.0) small.push_back(c);
    const double v = whitney_carleson_check(mu, theta, small);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("measure files") {
  std::istringstream in("# two atoms, m = 2\n0 1  0.5 2  3\n\n1 0.5 -1 1 0.25 # trailing\n");
  const auto mu = DiscreteMeasure::read(in, 1, 2);
  REQUIRE(mu.size() == 2);
  CHECK(mu.atoms()[0].points[1].t == 2.0);
  CHECK(mu.atoms()[1].mass == 0.25);
  std::ostringstream out;
  mu.write(out);
  std::istringstream back(out.str());
  CHECK(DiscreteMeasure::read(back, 1, 2).atoms()[1].points[0].x[0] == 1.0);

  auto line_of = [](const std::string& text) {
    std::istringstream s(text);
    try {
      DiscreteMeasure::read(s, 1, 1);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("0 1 1\n0 1\n") == 2);
  CHECK(line_of("0 1 1\n\n0 x 1\n") == 3);
  CHECK(line_of("0 -1 1\n") == 1);
  CHECK(line_of("0 1 0\n") == 1);
  CHECK_THROWS_AS(DiscreteMeasure::read_file("/nonexistent/measure.txt", 1, 1), ParseError);
}
