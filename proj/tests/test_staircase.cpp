#include <doctest.h>

#include <cmath>

#include "stairloc/errors.hpp"
#include "stairloc/staircase.hpp"

using namespace stairloc;

TEST_SUITE("staircase") {

TEST_CASE("plateau radii") {
  CHECK(floor_power(3, 2.0) == 9);
  CHECK(floor_power(3, 1.5) == 5);
  CHECK(floor_power(2, 1.5) == 2);
  CHECK(floor_power(10, 3.0) == 1000);
  CHECK(floor_power(1, 2.5) == 1);
  const Staircase s({2.0, 3.0, 1});
  CHECK(s.plateau_radius(1) == 1);
  CHECK(s.plateau_radius(4) == 16);
}

TEST_CASE("u values") {
  const Staircase s({2.0, 3.0, 1});
  CHECK(s.value(2.0) == 1.0);
  CHECK(s.value(4.0) == 0.015625);
  CHECK(s.value(0.5) == 0.0);
  CHECK(s.value(3.999999) == 1.0);
  CHECK(s.value_sq(16) == 0.015625);
  CHECK(s.value_sq(15) == 1.0);
  CHECK(s.value_sq(0) == 0.0);
}

TEST_CASE("jumps exactly at the plateau radii") {
  for (double kappa : {1.5, 2.0, 3.0}) {
    const Staircase s({kappa, 3.0, 1});
    for (std::int64_t k = 1; k < 40; ++k) {
      const auto r = s.plateau_radius(k);
      CHECK(s.plateau_index(static_cast<double>(r)) == k);
      CHECK(s.plateau_index(static_cast<double>(r) - 1e-9) == k - 1);
      CHECK(s.plateau_index_sq(r * r) == k);
      CHECK(s.plateau_index_sq(r * r - 1) == k - 1);
    }
  }
}

TEST_CASE("nonincreasing and right-continuous") {
  const Staircase s({1.5, 2.5, 2});
  double prev = s.value(1.0);
  for (double r = 1.0; r < 500.0; r += 0.37) {
    const double v = s.value(r);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(StaircaseParams({1.0, 3.0, 1}).validate(), Error);
  CHECK_THROWS_AS(StaircaseParams({2.0, 1.0, 1}).validate(), Error);
  CHECK_THROWS_AS(StaircaseParams({2.0, 2.0, 2}).validate(), Error);
  CHECK_NOTHROW(StaircaseParams({2.0, 3.0, 2}).validate());
}

TEST_CASE("powered staircase") {
  const Staircase s({2.0, 3.0, 1});
  const auto p = s.powered(2.0);
  CHECK(p.value(5.0) == doctest::Approx(s.value(5.0) * s.value(5.0)).epsilon(1e-15));
}

}
