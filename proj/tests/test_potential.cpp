#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "stairloc/disorder.hpp"
#include "stairloc/potential.hpp"

using namespace stairloc;

namespace {

DisorderConfig ones(std::vector<LatticePoint> window) {
  std::vector<double> a(window.size(), 1.0);
  return DisorderConfig::from_values(std::move(window), std::move(a));
}

// Exact sum of u(|y|) over |y| in [R, W) in d = 1.
double exact_tail_1d(const Staircase& s, std::int64_t R, std::int64_t W) {
  double acc = 0.0;
  for (std::int64_t y = W - 1; y >= R; --y) acc += 2.0 * s.value(static_cast<double>(y));
  return acc;
}

}  // namespace

TEST_SUITE("potential") {

TEST_CASE("cumulative potential") {
  const Staircase s({2.0, 3.0, 1});
  CHECK(cumulative_potential(LatticePoint{0}, ones({LatticePoint{2}}), s) == 1.0);
  CHECK(cumulative_potential(LatticePoint{0}, DisorderConfig::from_values({}, {}), s) == 0.0);
  CHECK(cumulative_potential(LatticePoint{0}, ones({LatticePoint{-4}, LatticePoint{2}}), s) == 1.015625);
  CHECK(cumulative_potential(LatticePoint{0}, ones({LatticePoint{0}}), s) == 0.0);
}

TEST_CASE("batched potential equals the pointwise one") {
  const Staircase s({2.0, 3.0, 2});
  const std::vector<LatticePoint> c{LatticePoint{0, 0}};
  const auto cfg = DisorderConfig::sample(window_around(c, 30), AmplitudeDistribution::bernoulli(0.5), 3);
  const auto pts = window_around(c, 4);
  const auto par = cumulative_potential(pts, cfg, s);
  const auto ser = cumulative_potential_serial(pts, cfg, s);
  CHECK(par == ser);
  for (std::size_t i = 0; i < pts.size(); i += 7) CHECK(par[i] == cumulative_potential(pts[i], cfg, s));
}

TEST_CASE("additive and monotone in the amplitudes") {
  const Staircase s({2.0, 3.0, 1});
  const std::vector<LatticePoint> c{LatticePoint{0}};
  const auto w = window_around(c, 40);
  const auto a = DisorderConfig::sample(w, AmplitudeDistribution::uniform(), 1);
  const std::vector<LatticePoint> left(w.begin(), w.begin() + 40);
  const std::vector<LatticePoint> right(w.begin() + 40, w.end());
  const auto l = a.fill_outside(left, 0.0);
  const auto r = a.fill_outside(right, 0.0);
  for (int x = -5; x <= 5; ++x) {
    const LatticePoint p{x};
    CHECK(cumulative_potential(p, a, s) ==
          doctest::Approx(cumulative_potential(p, l, s) + cumulative_potential(p, r, s)).epsilon(1e-14));
    std::vector<double> more(a.amplitudes().begin(), a.amplitudes().end());
    more[10] = 1.0;
    const auto b = DisorderConfig::from_values(w, more);
    CHECK(cumulative_potential(p, b, s) >= cumulative_potential(p, a, s));
  }
}

TEST_CASE("tail bound") {
  const Staircase s({2.0, 3.0, 1});
  CHECK(tail_bound(s, 1e6) < 1e-10);
  double prev = tail_bound(s, 1.0);
  for (double R = 2.0; R < 1e5; R *= 2.0) {
    const double t = tail_bound(s, R);
    CHECK(t <= prev);
    prev = t;
  }
  CHECK(tail_bound(s, 4.0) >= exact_tail_1d(s, 4, 100000));
  CHECK(tail_bound(s, 37.0) >= exact_tail_1d(s, 37, 100000));
  const double cut = certified_cutoff(s, 1e-6);
  CHECK(tail_bound(s, cut) <= 1e-6);
  CHECK(tail_bound(s, cut - 1.0) > 1e-6);
}

TEST_CASE("tail bound in two dimensions") {
  const Staircase s({2.0, 3.0, 2});
  double exact = 0.0;
  const int W = 600;
  for (int a = -W; a <= W; ++a)
    for (int b = -W; b <= W; ++b) {
      const auto d2 = static_cast<std::int64_t>(a) * a + static_cast<std::int64_t>(b) * b;
      if (d2 >= 100) exact += s.value_sq(d2);
    }
  CHECK(tail_bound(s, 10.0) >= exact);
}

TEST_CASE("interaction energy") {
  const InteractionParams ip{1.0, 1.0};
  MultiPoint x;
  x.count = 2;
  x.particle = {LatticePoint{0}, LatticePoint{0}};
  CHECK(interaction_energy(x, ip) == 1.0);
  x.particle[1] = LatticePoint{5};
  CHECK(interaction_energy(x, ip) == 0.0);
  x.particle[1] = LatticePoint{0};
  CHECK(interaction_energy(x, InteractionParams{1.0, 0.0}) == 0.0);
  CHECK_THROWS(InteractionParams({1.0, -1.0}).validate());
}

TEST_CASE("constant scatterers") {
  const Staircase s({2.0, 3.0, 1});
  const std::vector<LatticePoint> single{LatticePoint{0}};
  for (const auto& c : constant_scatterers(single, 1, 4, s)) CHECK(c.value == s.value_sq(squared_distance(c.site, single[0])));
  CHECK(constant_scatterers(single, 1, 1, s).size() == 6);

  const std::vector<LatticePoint> block{LatticePoint{0}, LatticePoint{1}, LatticePoint{2}, LatticePoint{3}};
  const auto found = constant_scatterers(block, 1, 6, s);
  CHECK(std::none_of(found.begin(), found.end(), [](const ConstantScatterer& c) { return c.site == LatticePoint{-15}; }));
  CHECK(constant_plateau_on_cube(Cube{LatticePoint{0}, 1}, LatticePoint{-15}, s) == -1);
  for (const auto& c : found) {
    double lo = 1e300, hi = -1e300;
    for (const auto& y : block) {
      const double v = s.value_sq(squared_distance(c.site, y));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(lo == hi);
    CHECK(c.value == lo);
  }
}

TEST_CASE("xi decomposition") {
  const Staircase s({2.0, 3.0, 1});
  const auto cube = MultiCube::two(LatticePoint{0}, LatticePoint{2}, 1);
  const std::vector<LatticePoint> c{LatticePoint{1}};
  const auto cfg = DisorderConfig::sample(window_around(c, 60), AmplitudeDistribution::bernoulli(0.5), 9);
  const auto xi = xi_decompose(cube, cfg, s);
  REQUIRE(xi.potential.size() == cube.size());
  for (std::size_t i = 0; i < xi.potential.size(); ++i)
    CHECK(std::abs(xi.residual[i] + xi.xi - xi.potential[i]) <= 1e-12 * std::max(1.0, std::abs(xi.potential[i])));
  CHECK(xi.xi > 0.0);

  const auto empty = xi_decompose(cube, DisorderConfig::from_values({}, {}), s);
  CHECK(empty.xi == 0.0);
  for (double r : empty.residual) CHECK(r == 0.0);

  // Only a far scatterer, constant on both projections: residual vanishes, xi = 2 * plateau.
  const auto far = ones({LatticePoint{40}});
  const auto d = xi_decompose(cube, far, s);
  CHECK(d.xi == 2.0 * s.value(38.0));
  for (double r : d.residual) CHECK(r == 0.0);
}

}
