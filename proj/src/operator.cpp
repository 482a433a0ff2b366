#include "stairloc/operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stairloc/errors.hpp"

namespace stairloc {

FiniteVolumeOperator::FiniteVolumeOperator(MultiCube cube, std::vector<MultiPoint> sites, SparseMatrix matrix,
                                           double coupling)
    : cube_(cube), sites_(std::move(sites)), matrix_(std::move(matrix)), coupling_(coupling) {}

std::size_t FiniteVolumeOperator::index_of(const MultiPoint& x) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), x);
  if (it == sites_.end() || *it != x) throw Error(ErrorKind::kDomain, "index_of: site not in cube");
  return static_cast<std::size_t>(it - sites_.begin());
}

double FiniteVolumeOperator::norm1() const {
  // Symmetric, so max row sum equals max column sum.
  double best = 0.0;
  for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(matrix_, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

void check_truncation(const MultiCube& cube, const DisorderConfig& config, const Staircase& staircase,
                      const Truncation& truncation) {
  const double tail = truncation.cutoff >= 1.0 ? tail_bound(staircase, truncation.cutoff) : INFINITY;
  if (tail > truncation.tail_tol) {
    const double need = certified_cutoff(staircase, truncation.tail_tol);
    throw TruncationError("assemble: cutoff " + std::to_string(truncation.cutoff) + " leaves tail bound " +
                              std::to_string(tail) + " above tolerance; required radius " + std::to_string(need),
                          need);
  }
  const auto reach = static_cast<int>(std::ceil(truncation.cutoff));
  const double cutoff_sq = truncation.cutoff * truncation.cutoff;
  for (int j = 0; j < cube.particles(); ++j) {
    const Cube c = cube.projection_cube(j);
    LatticePoint lo = c.center;
    LatticePoint hi = c.center;
    for (int i = 0; i < c.dim(); ++i) {
      lo[i] -= c.radius + reach;
      hi[i] += c.radius + reach;
    }
    bool missing = false;
    for_each_in_box(lo, hi, [&](const LatticePoint& y) {
      if (missing) return;
      std::int64_t gap_sq = 0;
      for (int i = 0; i < c.dim(); ++i) {
        const std::int64_t g =
            std::max<std::int64_t>(0, std::abs(static_cast<std::int64_t>(y[i]) - c.center[i]) - c.radius);
        gap_sq += g * g;
      }
      if (static_cast<double>(gap_sq) < cutoff_sq && !config.contains(y)) missing = true;
    });
    if (missing) {
      throw TruncationError("assemble: window does not cover the cutoff radius around the cube", truncation.cutoff);
    }
  }
}

FiniteVolumeOperator assemble_from_potential(const MultiCube& cube, const std::vector<LatticePoint>& projection_sites,
                                             const std::vector<double>& potential,
                                             const InteractionParams& interaction, double coupling) {
  auto pts = sites(cube);
  const int n = cube.particles();
  const int d = cube.dim();
  const auto dim = static_cast<Eigen::Index>(pts.size());
  auto potential_at = [&](const LatticePoint& p) {
    auto it = std::lower_bound(projection_sites.begin(), projection_sites.end(), p);
    return potential[static_cast<std::size_t>(it - projection_sites.begin())];
  };

  // Lexicographic sites of a product of boxes: neighbour offsets are strides.
  const int side = 2 * cube.radius() + 1;
  const int axes = n * d;
  std::vector<Eigen::Index> stride(static_cast<std::size_t>(axes));
  Eigen::Index s = 1;
  for (int a = axes - 1; a >= 0; --a) {
    stride[static_cast<std::size_t>(a)] = s;
    s *= side;
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim) * static_cast<std::size_t>(2 * axes + 1));
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto& x = pts[static_cast<std::size_t>(i)];
    double diag = 2.0 * n * d;
    for (int j = 0; j < n; ++j) diag += coupling * potential_at(x.particle[static_cast<std::size_t>(j)]);
    diag += interaction_energy(x, interaction);
    triplets.emplace_back(i, i, diag);
    for (int a = 0; a < axes; ++a) {
      const int j = a / d;
      const int axis = a % d;
      const int local = x.particle[static_cast<std::size_t>(j)][axis] - cube.center(j)[axis] + cube.radius();
      if (local + 1 < side) {
        const Eigen::Index nb = i + stride[static_cast<std::size_t>(a)];
        triplets.emplace_back(i, nb, -1.0);
        triplets.emplace_back(nb, i, -1.0);
      }
    }
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return FiniteVolumeOperator(cube, std::move(pts), std::move(m), coupling);
}

FiniteVolumeOperator assemble(const MultiCube& cube, const DisorderConfig& config, const Staircase& staircase,
                              const InteractionParams& interaction, double coupling,
                              const std::optional<Truncation>& truncation) {
  if (cube.dim() != staircase.dim()) throw Error(ErrorKind::kDomain, "assemble: cube and staircase dimensions differ");
  interaction.validate();
  if (truncation) check_truncation(cube, config, staircase, *truncation);
  const auto proj = projection(cube);
  std::vector<double> potential;
  if (coupling != 0.0) potential = cumulative_potential(proj, config, staircase);
  else potential.assign(proj.size(), 0.0);
  return assemble_from_potential(cube, proj, potential, interaction, coupling);
}

ProjectionPair assemble_projections(const MultiCube& cube, const DisorderConfig& config, const Staircase& staircase,
                                    const InteractionParams& interaction, double coupling,
                                    const std::optional<Truncation>& truncation) {
  if (!is_non_interactive(cube)) {
    throw Error(ErrorKind::kNotNonInteractive, "assemble_projections: cube is partially interactive");
  }
  if (interaction.strength > 0.0) {
    // Smallest Euclidean distance between the two projection cubes.
    std::int64_t gap_sq = 0;
    for (int i = 0; i < cube.dim(); ++i) {
      const std::int64_t g = std::max<std::int64_t>(
          0, std::abs(static_cast<std::int64_t>(cube.center(0)[i]) - cube.center(1)[i]) - 2 * cube.radius());
      gap_sq += g * g;
    }
    if (static_cast<double>(gap_sq) <= interaction.range * interaction.range) {
      throw Error(ErrorKind::kRangeViolation, "assemble_projections: two-body interaction reaches inside the cube");
    }
  }
  const InteractionParams none{};
  auto first = assemble(MultiCube::one(cube.projection_cube(0)), config, staircase, none, coupling, truncation);
  auto second = assemble(MultiCube::one(cube.projection_cube(1)), config, staircase, none, coupling, truncation);
  return ProjectionPair{std::move(first), std::move(second)};
}

}  // namespace stairloc
