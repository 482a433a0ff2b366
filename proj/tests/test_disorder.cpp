#include <doctest.h>

#include <cmath>
#include <set>

#include "stairloc/disorder.hpp"
#include "stairloc/errors.hpp"
#include "stairloc/stats.hpp"

using namespace stairloc;

TEST_SUITE("disorder") {

TEST_CASE("laws") {
  const auto b = AmplitudeDistribution::bernoulli(0.25);
  CHECK(b.mean() == 0.25);
  CHECK(b.variance() == doctest::Approx(0.1875));
  CHECK(b.quantile(0.2) == 1.0);
  CHECK(b.quantile(0.3) == 0.0);
  CHECK(b.support().size() == 2);
  const auto u = AmplitudeDistribution::uniform();
  CHECK(u.mean() == 0.5);
  CHECK(u.variance() == doctest::Approx(1.0 / 12.0));
  CHECK_THROWS_AS(u.support(), Error);
  CHECK_THROWS_AS(AmplitudeDistribution::atoms({{0.0, 0.5}, {1.5, 0.5}}).validate(), Error);
  CHECK_THROWS_AS(AmplitudeDistribution::atoms({{0.0, 0.5}, {1.0, 0.4}}).validate(), Error);
  CHECK_THROWS_AS(AmplitudeDistribution::bernoulli(1.0).validate(), Error);
  CHECK_NOTHROW(AmplitudeDistribution::bernoulli(1.0).validate(false));
}

TEST_CASE("hash is deterministic and seed sensitive") {
  const LatticePoint x{3, -4};
  CHECK(site_hash(1, x, 0) == site_hash(1, x, 0));
  CHECK(site_hash(1, x, 0) != site_hash(2, x, 0));
  CHECK(site_hash(1, x, 0) != site_hash(1, x, 1));
  CHECK(site_hash(1, x, 0) != site_hash(1, LatticePoint{-4, 3}, 0));
  CHECK(derive_seed(5, 1, 2) != derive_seed(5, 2, 1));
  const double v = unit_interval(site_hash(9, x, 0));
  CHECK(v >= 0.0);
  CHECK(v < 1.0);
}

TEST_CASE("sampling is a pure function of the seed") {
  const std::vector<LatticePoint> c{LatticePoint{0, 0}};
  const auto w = window_around(c, 5);
  CHECK(w.size() == 121);
  const auto a = DisorderConfig::sample(w, AmplitudeDistribution::uniform(), 17);
  const auto b = DisorderConfig::sample(w, AmplitudeDistribution::uniform(), 17);
  CHECK(std::equal(a.amplitudes().begin(), a.amplitudes().end(), b.amplitudes().begin()));
  // A sub-window draws the same values.
  const auto small = DisorderConfig::sample(window_around(c, 2), AmplitudeDistribution::uniform(), 17);
  for (const auto& y : small.window()) CHECK(*small.amplitude(y) == *a.amplitude(y));
}

TEST_CASE("resampling leaves the complement untouched") {
  const std::vector<LatticePoint> c{LatticePoint{0}};
  const auto a = DisorderConfig::sample(window_around(c, 20), AmplitudeDistribution::uniform(), 4);
  const std::vector<LatticePoint> region{LatticePoint{-1}, LatticePoint{0}, LatticePoint{1}};
  const auto b = a.resample_region(region, 3);
  std::size_t changed = 0;
  for (const auto& y : a.window()) {
    const bool inside = std::find(region.begin(), region.end(), y) != region.end();
    if (inside) {
      changed += *a.amplitude(y) != *b.amplitude(y);
      CHECK(b.trial_of(y) == 3);
    } else {
      CHECK(*a.amplitude(y) == *b.amplitude(y));
      CHECK(b.trial_of(y) == 0);
    }
  }
  CHECK(changed == 3);
  CHECK(a.resample_region(region, 3).amplitudes()[20] == b.amplitudes()[20]);
  const std::vector<LatticePoint> outside{LatticePoint{50}};
  CHECK_THROWS_AS(a.resample_region(outside, 1), Error);
  CHECK(!a.amplitude(LatticePoint{50}).has_value());
}

TEST_CASE("explicit values") {
  const std::vector<LatticePoint> w{LatticePoint{0}, LatticePoint{1}, LatticePoint{2}};
  const auto a = DisorderConfig::from_values(w, {0.1, 0.2, 0.3});
  const std::vector<LatticePoint> keep{LatticePoint{1}};
  const auto f = a.fill_outside(keep, 1.0);
  CHECK(*f.amplitude(LatticePoint{0}) == 1.0);
  CHECK(*f.amplitude(LatticePoint{1}) == 0.2);
  const std::vector<double> v{0.9};
  CHECK(*a.with_values(keep, v).amplitude(LatticePoint{1}) == 0.9);
}

TEST_CASE("enumerator") {
  const std::vector<Atom> atoms{{0.0, 0.25}, {0.5, 0.25}, {1.0, 0.5}};
  ConfigEnumerator e(4, atoms);
  std::set<std::vector<double>> seen;
  double total = 0.0;
  while (e.next()) {
    seen.insert(std::vector<double>(e.values().begin(), e.values().end()));
    total += e.weight();
  }
  CHECK(e.count() == 81);
  CHECK(seen.size() == 81);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(ConfigEnumerator(30, atoms, 1000), Error);
}

TEST_CASE("bernoulli frequency") {
  const std::vector<LatticePoint> c{LatticePoint{0}};
  const auto a = DisorderConfig::sample(window_around(c, 5000), AmplitudeDistribution::bernoulli(0.3), 21);
  std::uint64_t ones = 0;
  for (double v : a.amplitudes()) ones += v == 1.0;
  const auto est = wilson_interval(ones, a.size(), 3.29);
  CHECK(est.lo <= 0.3);
  CHECK(est.hi >= 0.3);
}

}
