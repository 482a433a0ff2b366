#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "stairloc/errors.hpp"
#include "stairloc/operator.hpp"
#include "stairloc/spectral.hpp"

using namespace stairloc;

namespace {

// Dirichlet Laplacian on a path of n sites: 2 - 2 cos(pi j / (n + 1)).
SparseMatrix path(int n, double shift = 0.0) {
  SparseMatrix h(n, n);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0 + shift * i);
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -1.0);
      t.emplace_back(i + 1, i, -1.0);
    }
  }
  h.setFromTriplets(t.begin(), t.end());
  return h;
}

double path_eig(int n, int j) { return 2.0 - 2.0 * std::cos(std::numbers::pi * j / (n + 1)); }

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("dense path spectrum") {
  const auto r = full_spectrum(path(10), true);
  REQUIRE(r.eigenvalues.size() == 10);
  for (int j = 1; j <= 10; ++j) CHECK(r.eigenvalues[j - 1] == doctest::Approx(path_eig(10, j)).epsilon(1e-12));
  CHECK(r.max_residual <= residual_tolerance(4.0));
  CHECK_THROWS_AS(full_spectrum(path(10), false, 5), Error);
}

TEST_CASE("lanczos lowest pairs") {
  const int n = 600;
  const auto r = lowest_eigenpairs(path(n), 5);
  REQUIRE(r.eigenvalues.size() == 5);
  for (int j = 1; j <= 5; ++j) CHECK(r.eigenvalues[j - 1] == doctest::Approx(path_eig(n, j)).epsilon(1e-9));
  CHECK(r.method == SolverMethod::kIterative);
  CHECK(r.max_residual <= residual_tolerance(4.0));

  // Two uncoupled copies: every eigenvalue is doubled.
  SparseMatrix h(2 * n, 2 * n);
  std::vector<Eigen::Triplet<double>> t;
  const auto p = path(n);
  for (int k = 0; k < p.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(p, k); it; ++it) {
      t.emplace_back(it.row(), it.col(), it.value());
      t.emplace_back(it.row() + n, it.col() + n, it.value());
    }
  h.setFromTriplets(t.begin(), t.end());
  const auto d = lowest_eigenpairs(h, 4);
  CHECK(d.eigenvalues[0] == doctest::Approx(path_eig(n, 1)).epsilon(1e-9));
  CHECK(d.eigenvalues[1] == doctest::Approx(path_eig(n, 1)).epsilon(1e-9));
  CHECK(d.eigenvalues[2] == doctest::Approx(path_eig(n, 2)).epsilon(1e-9));
  CHECK(d.eigenvalues[3] == doctest::Approx(path_eig(n, 2)).epsilon(1e-9));
}

TEST_CASE("distance to the spectrum") {
  const auto h = path(3);
  CHECK(dist_to_spectrum(h, 2.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dist_to_spectrum(h, 2.5) == doctest::Approx(0.5));
  CHECK(dist_to_spectrum(h, -1.0) == doctest::Approx(3.0 - std::sqrt(2.0)));
  const std::vector<double> ev{1.0, 4.0};
  CHECK(dist_to_spectrum(ev, 2.0) == 1.0);
  CHECK(distance_at_least(h, 2.5, 0.4));
  CHECK(!distance_at_least(h, 2.5, 0.6));
  const auto big = path(700, 0.01);
  const auto est = distance_estimate(big, 1.234, 100);
  const auto ref = dist_to_spectrum(full_spectrum(big, false).eigenvalues, 1.234);
  CHECK(std::abs(est.value - ref) <= est.error + 1e-9);
}

TEST_CASE("green function") {
  SparseMatrix one(1, 1);
  one.insert(0, 0) = 3.0;
  CHECK(green_entry(one, 1.0, 0, 0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(Resolvent(one, 3.0), ResonantEnergyError);

  const auto h = path(8, 0.3);
  const Resolvent g(h, 1.1);
  const Eigen::MatrixXd dense = (Eigen::MatrixXd(h) - 1.1 * Eigen::MatrixXd::Identity(8, 8)).inverse();
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      CHECK(g.entry(x, y) == doctest::Approx(dense(x, y)).epsilon(1e-10));
      CHECK(g.entry(x, y) == doctest::Approx(g.entry(y, x)).epsilon(1e-10));
    }
  // The sparse path agrees with the dense one.
  const Resolvent sparse(h, 1.1, 2);
  for (int x = 0; x < 8; ++x) CHECK(sparse.entry(x, 5) == doctest::Approx(dense(x, 5)).epsilon(1e-10));
  const auto eig = std::make_shared<const SpectrumResult>(full_spectrum(h, true));
  const Resolvent shared(h, eig, 1.1);
  CHECK(shared.norm() == doctest::Approx(1.0 / dist_to_spectrum(eig->eigenvalues, 1.1)));
}

TEST_CASE("eigenfunction correlator") {
  const auto r = full_spectrum(path(6, 0.2), true);
  // Over the whole spectrum sum_k psi_k(x)^2 = 1.
  for (int x = 0; x < 6; ++x) CHECK(ef_correlator(r, EnergyInterval::all(), x, x) == doctest::Approx(1.0));
  CHECK(ef_correlator(r, EnergyInterval{100.0, 200.0}, 0, 5) == 0.0);
  double manual = 0.0;
  for (int k = 0; k < 6; ++k) manual += std::abs(r.eigenvectors(0, k) * r.eigenvectors(5, k));
  CHECK(ef_correlator(r, EnergyInterval::all(), 0, 5) == doctest::Approx(manual));

  // Degenerate pair: one projector, so |P x| |P y| = 1 in any basis.
  SparseMatrix id(2, 2);
  id.insert(0, 0) = 1.0;
  id.insert(1, 1) = 1.0;
  const auto d = full_spectrum(id, true);
  CHECK(ef_correlator(d, EnergyInterval::all(), 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral gap") {
  const std::vector<double> a{0.0, 1.0, 5.0};
  const std::vector<double> b{1.3, 4.6};
  CHECK(min_spectral_gap(a, b) == doctest::Approx(0.3));
  CHECK(min_spectral_gap(b, a) == doctest::Approx(0.3));
}

}
