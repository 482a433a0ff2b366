#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "stairloc/errors.hpp"
#include "stairloc/geometry.hpp"

using namespace stairloc;

TEST_SUITE("geometry") {

TEST_CASE("sites") {
  const auto s = sites(Cube{LatticePoint{0}, 1});
  REQUIRE(s.size() == 3);
  CHECK(s[0] == LatticePoint{-1});
  CHECK(s[1] == LatticePoint{0});
  CHECK(s[2] == LatticePoint{1});
  CHECK(sites(Cube{LatticePoint{4, -2}, 0}).size() == 1);
  CHECK(sites(Cube{LatticePoint{4, -2}, 0})[0] == LatticePoint{4, -2});
  const auto m = sites(MultiCube::two(LatticePoint{0}, LatticePoint{5}, 1));
  CHECK(m.size() == 9);
  CHECK(std::is_sorted(m.begin(), m.end()));
  CHECK(MultiCube::two(LatticePoint{0, 0}, LatticePoint{9, 9}, 2).size() == 625);
}

TEST_CASE("inner boundary") {
  const auto b = inner_boundary(Cube{LatticePoint{0}, 2});
  REQUIRE(b.size() == 2);
  CHECK(b[0] == LatticePoint{-2});
  CHECK(b[1] == LatticePoint{2});
  CHECK(inner_boundary(Cube{LatticePoint{0, 0}, 1}).size() == 8);
  CHECK_THROWS_AS(inner_boundary(Cube{LatticePoint{0}, 0}), Error);

  // Brute force: a pair is on the boundary iff some neighbour leaves the cube.
  const auto cube = MultiCube::two(LatticePoint{0}, LatticePoint{3}, 1);
  const auto mb = inner_boundary(cube);
  std::size_t expected = 0;
  for (const auto& x : sites(cube)) {
    bool out = false;
    for (int j = 0; j < 2; ++j)
      for (int step : {-1, 1}) {
        MultiPoint y = x;
        y.particle[static_cast<std::size_t>(j)][0] += step;
        out = out || !cube.contains(y);
      }
    expected += out;
    CHECK(out == std::binary_search(mb.begin(), mb.end(), x));
  }
  CHECK(mb.size() == expected);
  CHECK(expected == 8);
}

TEST_CASE("core") {
  CHECK(core(Cube{LatticePoint{0}, 9}).radius == 3);
  CHECK(core(Cube{LatticePoint{0}, 10}).radius == 3);
  CHECK(core(Cube{LatticePoint{0}, 3}).radius == 1);
  CHECK_THROWS_AS(core(Cube{LatticePoint{0}, 2}), Error);
  const Cube c{LatticePoint{1, 2}, 6};
  const auto k = core(c);
  const auto b = inner_boundary(c);
  for (const auto& x : sites(k)) {
    CHECK(c.contains(x));
    CHECK_FALSE(std::binary_search(b.begin(), b.end(), x));
  }
}

TEST_CASE("non-interactive cubes") {
  CHECK(is_non_interactive(MultiCube::two(LatticePoint{0}, LatticePoint{9}, 2)));
  CHECK_FALSE(is_non_interactive(MultiCube::two(LatticePoint{0}, LatticePoint{8}, 2)));
  CHECK_FALSE(is_non_interactive(MultiCube::two(LatticePoint{4}, LatticePoint{4}, 0)));
  CHECK(is_non_interactive(MultiCube::two(LatticePoint{9}, LatticePoint{0}, 2)));
  CHECK(is_non_interactive(MultiCube::two(LatticePoint{100}, LatticePoint{109}, 2)));
}

TEST_CASE("shell sites") {
  const Staircase s({2.0, 3.0, 1});
  const std::vector<LatticePoint> origin{LatticePoint{0}};
  const auto s1 = shell_sites(origin, 1, s);
  CHECK(s1.size() == 6);
  for (int x : {-3, -2, -1, 1, 2, 3}) CHECK(std::binary_search(s1.begin(), s1.end(), LatticePoint{x}));
  const auto s2 = shell_sites(origin, 2, s);
  CHECK(s2.size() == 10);
  CHECK(s2.front() == LatticePoint{-8});
  CHECK(s2.back() == LatticePoint{8});

  const Staircase s2d({2.0, 3.0, 2});
  const auto square = sites(Cube{LatticePoint{0, 0}, 1});
  const auto s3 = shell_sites(square, 3, s2d);
  std::size_t count = 0;
  for (int a = -20; a <= 20; ++a)
    for (int b = -20; b <= 20; ++b) {
      const LatticePoint x{a, b};
      const auto d2 = squared_distance_to_set(x, square);
      const bool in = d2 >= 81 && d2 < 256;
      count += in;
      CHECK(in == std::binary_search(s3.begin(), s3.end(), x));
    }
  CHECK(s3.size() == count);
}

TEST_CASE("shells partition the annulus") {
  const Staircase s({1.5, 3.0, 2});
  const std::vector<LatticePoint> set{LatticePoint{0, 0}, LatticePoint{3, 1}};
  std::set<LatticePoint> seen;
  std::size_t total = 0;
  for (std::int64_t n = 1; n <= 6; ++n) {
    for (const auto& x : shell_sites(set, n, s)) {
      CHECK(seen.insert(x).second);
      ++total;
    }
  }
  const auto hi = s.plateau_radius(7);
  std::size_t expected = 0;
  for (int a = -40; a <= 40; ++a)
    for (int b = -40; b <= 40; ++b) {
      const auto d2 = squared_distance_to_set(LatticePoint{a, b}, set);
      expected += d2 >= 1 && d2 < hi * hi;
    }
  CHECK(total == expected);
}

}
