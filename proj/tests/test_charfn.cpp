#include <doctest.h>

#include <cmath>
#include <map>

#include "stairloc/charfn.hpp"
#include "stairloc/errors.hpp"

using namespace stairloc;

namespace {

// Brute-force law of a bounded sum over every site assignment.
std::map<double, double> brute_law(const ShellSum& sum, const std::vector<Atom>& atoms) {
  std::vector<double> amp;
  for (std::int64_t n = sum.first(); n <= sum.table_last(); ++n)
    for (std::int64_t k = 0; k < sum.count(n); ++k) amp.push_back(sum.amplitude(n));
  std::map<double, double> law;
  ConfigEnumerator e(amp.size(), atoms);
  while (e.next()) {
    double s = 0.0;
    for (std::size_t i = 0; i < amp.size(); ++i) s += amp[i] * e.values()[i];
    law[s] += e.weight();
  }
  // Merge sums that differ only by rounding.
  std::map<double, double> merged;
  for (const auto& [s, w] : law) {
    if (!merged.empty() && s - merged.rbegin()->first <= 1e-12) merged.rbegin()->second += w;
    else merged[s] = w;
  }
  return merged;
}

}  // namespace

TEST_SUITE("charfn") {

TEST_CASE("single-atom charfn") {
  const auto b = AmplitudeDistribution::bernoulli(0.3);
  const auto atoms = b.support();
  for (double s : {1e-9, 1e-3, 0.7, 2.0, 3.14159}) {
    const double expected = 0.5 * std::log(1.0 - 4.0 * 0.3 * 0.7 * std::pow(std::sin(0.5 * s), 2));
    CHECK(log_abs_atom_charfn(atoms, s) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::log(std::abs(atom_charfn(atoms, s))) == doctest::Approx(expected).epsilon(1e-9));
  }
  // Small-s accuracy: -log|phi| ~ p(1-p) s^2 / 2.
  CHECK(-log_abs_atom_charfn(atoms, 1e-8) == doctest::Approx(0.21 * 0.5e-16).epsilon(1e-6));
}

TEST_CASE("shell tables") {
  const auto a = ShellSum::abstract(1.0, 2, 3.0, 1, 5);
  CHECK(a.count(1) == 1);
  CHECK(a.count(4) == 4);
  CHECK(a.amplitude(2) == 0.125);
  CHECK(a.total_count() == 15);
  CHECK(lattice_ball_count(2, 2) == 5);
  CHECK(lattice_ball_count(1, 10) == 7);
  const Staircase s({2.0, 4.0, 2});
  const auto par = origin_shell_counts(s, 1, 40);
  CHECK(par == origin_shell_counts_serial(s, 1, 40));
  // K_1 = #{1 <= |x| < 4} in Z^2.
  CHECK(par[0] == lattice_ball_count(2, 16) - 1);
  const std::vector<LatticePoint> c{LatticePoint{0, 0}};
  CHECK(ShellSum::lattice(s, c, 1, 40).count(7) == par[6]);
  double exact_tail = 0.0;
  for (int n = 1000000; n > 100; --n) exact_tail += 1.0 / (static_cast<double>(n) * n);
  const double bound = ShellSum::abstract(1.0, 1, 2.0, 1, kUnbounded, 100).tail_weight(100, 1);
  CHECK(bound >= exact_tail);
  CHECK(bound <= 2.5 * exact_tail);
}

TEST_CASE("log charfn is additive over shells") {
  const auto b = AmplitudeDistribution::bernoulli(0.5);
  const auto sum = ShellSum::abstract(1.0, 2, 3.0, 1, 10);
  for (double t : {0.5, 7.0, 300.0}) {
    const double whole = log_abs_charfn(sum, b, t);
    CHECK(whole == doctest::Approx(log_abs_charfn(sum.slice(1, 4), b, t) + log_abs_charfn(sum.slice(5, 10), b, t))
                       .epsilon(1e-12));
    CHECK(whole <= 0.0);
    CHECK(std::log(std::abs(charfn(sum, b, t))) == doctest::Approx(whole).epsilon(1e-9));
  }
  const std::vector<double> ts{0.1, 1.0, 10.0, 100.0};
  CHECK(log_abs_charfn(sum, b, ts) == log_abs_charfn_serial(sum, b, ts));
  CHECK_THROWS_AS(log_abs_charfn(sum, AmplitudeDistribution::uniform(), 1.0), Error);
}

TEST_CASE("moments") {
  const auto b = AmplitudeDistribution::bernoulli(0.5);
  const auto sum = ShellSum::abstract(1.0, 1, 2.0, 1, 3);
  const double w = 1.0 + 0.25 + 1.0 / 9.0;
  const double w2 = 1.0 + 1.0 / 16.0 + 1.0 / 81.0;
  CHECK(mean(sum, b) == doctest::Approx(0.5 * w));
  CHECK(variance(sum, b) == doctest::Approx(0.25 * w2));
}

TEST_CASE("decay fit on a synthetic stretched exponential") {
  std::vector<double> t, y;
  for (int i = 0; i <= 60; ++i) {
    t.push_back(std::pow(10.0, i / 10.0));
    y.push_back(3.0 * std::sqrt(t.back()));
  }
  const auto fit = fit_decay_exponent(t, y, 1.0);
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  REQUIRE(!fit.local_slope.empty());
  for (double s : fit.local_slope) CHECK(s == doctest::Approx(0.5).epsilon(1e-10));
  y[3] = 0.0;
  CHECK(fit_decay_exponent(t, y, 1.0).dropped == 1);
}

TEST_CASE("density reconstruction") {
  const auto b = AmplitudeDistribution::bernoulli(0.5);
  const auto sum = ShellSum::abstract(1.0, 1, 1.5, 1, 400);
  std::vector<double> v;
  const double hi = mean(sum, b) * 2.0;
  const int n = 4000;
  for (int i = 0; i <= n; ++i) v.push_back(-0.5 + (hi + 1.0) * i / n);
  const auto rho = density_reconstruct(sum, b, v, 4000.0);
  double mass = 0.0;
  for (int i = 0; i < n; ++i) mass += 0.5 * (rho.density[i] + rho.density[i + 1]) * (v[i + 1] - v[i]);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  for (double d : rho.density) CHECK(d >= -1e-8);
  CHECK(rho.quadrature_error < 1e-8);
  CHECK_THROWS_AS(density_reconstruct(sum, b, v, 1.0), TruncationError);
}

TEST_CASE("exact law against brute force") {
  const auto b = AmplitudeDistribution::atoms({{0.0, 0.2}, {0.5, 0.3}, {1.0, 0.5}});
  const auto sum = ShellSum::abstract(1.0, 2, 3.0, 1, 4);
  const auto law = ShellDistribution::exact(sum, b);
  REQUIRE(law.is_exact());
  const auto brute = brute_law(sum, b.support());
  CHECK(law.probability(law.min_value(), law.max_value()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(law.min_value() == 0.0);
  for (double a : {0.0, 0.1, 0.37, 0.8, 1.2}) {
    for (double eps : {0.0, 0.01, 0.2}) {
      double p = 0.0;
      for (const auto& [s, w] : brute)
        if (s >= a - 1e-12 && s <= a + eps + 1e-12) p += w;
      CHECK(small_interval_prob(law, a, eps).p == doctest::Approx(p).epsilon(1e-12));
    }
  }
  double top = 0.0;
  for (const auto& [s, w] : brute) top = std::max(top, w);
  CHECK(max_interval_prob(law, 0.0).p == doctest::Approx(top).epsilon(1e-12));
  // Edge: S <= v_* only when every site takes the smallest atom.
  CHECK(edge_tail(law, sum, b, 0.0).p == doctest::Approx(std::pow(0.2, 10)).epsilon(1e-9));
  CHECK(edge_tail(law, sum, b, 100.0).p == doctest::Approx(1.0));
  CHECK_THROWS_AS(ShellDistribution::exact(ShellSum::abstract(1.0, 2, 3.0, 1, 200), b, 1000), Error);
}

TEST_CASE("sampled law and empirical charfn") {
  const auto b = AmplitudeDistribution::bernoulli(0.5);
  const auto sum = ShellSum::abstract(1.0, 2, 3.0, 1, 6);
  const std::size_t n = 4000;
  const auto law = ShellDistribution::sampled(sum, b, n, 99);
  CHECK(!law.is_exact());
  CHECK(law.samples() == n);
  CHECK(sample_shell_sum(sum, b, 99, 7) == sample_shell_sum(sum, b, 99, 7));
  std::vector<double> draws;
  for (std::size_t i = 0; i < n; ++i) draws.push_back(sample_shell_sum(sum, b, 5, i));
  const std::vector<double> ts{0.5, 2.0, 8.0, 30.0};
  const auto emp = empirical_charfn(draws, ts);
  for (std::size_t i = 0; i < ts.size(); ++i)
    CHECK(std::abs(emp[i] - charfn(sum, b, ts[i])) <= 3.0 / std::sqrt(static_cast<double>(n)));
  const auto est = law.interval(law.min_value(), law.max_value());
  CHECK(est.p == 1.0);
  const auto built = ShellDistribution::build(ShellSum::abstract(1.0, 2, 3.0, 1, 300), b, 50, 1, 1000);
  CHECK(!built.is_exact());
}

}
