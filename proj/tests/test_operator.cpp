#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "stairloc/errors.hpp"
#include "stairloc/operator.hpp"
#include "stairloc/spectral.hpp"

using namespace stairloc;

namespace {

std::vector<double> eigs(const FiniteVolumeOperator& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense());
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

DisorderConfig zeros(const std::vector<LatticePoint>& centers, int radius) {
  const auto w = window_around(centers, radius);
  return DisorderConfig::from_values(w, std::vector<double>(w.size(), 0.0));
}

}  // namespace

TEST_SUITE("operator") {

TEST_CASE("free three-site chain") {
  const Staircase s({2.0, 3.0, 1});
  const std::vector<LatticePoint> c{LatticePoint{0}};
  const auto op = assemble(MultiCube::one(Cube{LatticePoint{0}, 1}), zeros(c, 10), s, {}, 1.0);
  CHECK(op.dim() == 3);
  const auto e = eigs(op);
  CHECK(e[0] == doctest::Approx(2.0 - std::sqrt(2.0)));
  CHECK(e[1] == doctest::Approx(2.0));
  CHECK(e[2] == doctest::Approx(2.0 + std::sqrt(2.0)));
  CHECK(op.norm1() == 4.0);
}

TEST_CASE("single site") {
  const Staircase s({2.0, 3.0, 1});
  const std::vector<LatticePoint> w{LatticePoint{0}, LatticePoint{3}};
  const auto cfg = DisorderConfig::from_values(w, {1.0, 1.0});
  const auto op = assemble(MultiCube::one(Cube{LatticePoint{0}, 0}), cfg, s, {}, 2.0);
  REQUIRE(op.dim() == 1);
  CHECK(op.dense()(0, 0) == 2.0 + 2.0 * s.value(3.0));
}

TEST_CASE("two particles") {
  const Staircase s({2.0, 3.0, 1});
  const auto cube = MultiCube::two(LatticePoint{0}, LatticePoint{0}, 1);
  const std::vector<LatticePoint> c{LatticePoint{0}};
  const auto op = assemble(cube, zeros(c, 10), s, InteractionParams{0.0, 5.0}, 1.0);
  CHECK(op.dim() == 9);
  const auto d = op.diagonal();
  for (std::size_t i = 0; i < op.dim(); ++i) {
    const auto& x = op.sites()[i];
    CHECK(d(static_cast<Eigen::Index>(i)) == (x.particle[0] == x.particle[1] ? 9.0 : 4.0));
  }
  CHECK(op.dense().isApprox(op.dense().transpose()));
}

TEST_CASE("non-interactive spectrum is a Minkowski sum") {
  const Staircase s({2.0, 3.0, 1});
  const auto cube = MultiCube::two(LatticePoint{0}, LatticePoint{20}, 2);
  const std::vector<LatticePoint> c{LatticePoint{0}, LatticePoint{20}};
  const auto cfg = DisorderConfig::sample(window_around(c, 40), AmplitudeDistribution::uniform(), 8);
  const InteractionParams ip{1.0, 1.0};
  const auto full = eigs(assemble(cube, cfg, s, ip, 0.7));
  const auto pair = assemble_projections(cube, cfg, s, ip, 0.7);
  const auto a = eigs(pair.first);
  const auto b = eigs(pair.second);
  std::vector<double> sum;
  for (double x : a)
    for (double y : b) sum.push_back(x + y);
  std::sort(sum.begin(), sum.end());
  REQUIRE(sum.size() == full.size());
  for (std::size_t i = 0; i < sum.size(); ++i) CHECK(full[i] == doctest::Approx(sum[i]).epsilon(1e-12));
  CHECK_THROWS_AS(assemble_projections(MultiCube::two(LatticePoint{0}, LatticePoint{3}, 2), cfg, s, ip, 0.7), Error);
  CHECK_THROWS_AS(assemble_projections(cube, cfg, s, InteractionParams{30.0, 1.0}, 0.7), Error);
}

TEST_CASE("eigenvalues are monotone in the amplitudes") {
  const Staircase s({2.0, 3.0, 1});
  const std::vector<LatticePoint> c{LatticePoint{0}};
  const auto w = window_around(c, 30);
  const auto a = DisorderConfig::sample(w, AmplitudeDistribution::uniform(), 2);
  std::vector<double> raised(a.amplitudes().begin(), a.amplitudes().end());
  for (std::size_t i = 0; i < raised.size(); i += 3) raised[i] = std::min(1.0, raised[i] + 0.5);
  const auto b = DisorderConfig::from_values(w, raised);
  const auto cube = MultiCube::one(Cube{LatticePoint{0}, 3});
  const auto ea = eigs(assemble(cube, a, s, {}, 1.0));
  const auto eb = eigs(assemble(cube, b, s, {}, 1.0));
  for (std::size_t i = 0; i < ea.size(); ++i) CHECK(eb[i] >= ea[i] - 1e-12);
}

TEST_CASE("truncation is enforced") {
  const Staircase s({2.0, 3.0, 1});
  const std::vector<LatticePoint> c{LatticePoint{0}};
  const auto cfg = zeros(c, 10);
  const auto cube = MultiCube::one(Cube{LatticePoint{0}, 2});
  CHECK_THROWS_AS(assemble(cube, cfg, s, {}, 1.0, Truncation{100.0, 1e-2}), TruncationError);
  CHECK_THROWS_AS(assemble(cube, cfg, s, {}, 1.0, Truncation{5.0, 1e-12}), TruncationError);
  CHECK_NOTHROW(assemble(cube, cfg, s, {}, 1.0, Truncation{5.0, 1.0}));
}

}
