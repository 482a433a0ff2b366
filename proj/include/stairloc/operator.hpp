#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "stairloc/disorder.hpp"
#include "stairloc/geometry.hpp"
#include "stairloc/potential.hpp"
#include "stairloc/staircase.hpp"

namespace stairloc {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Declared truncation of the infinite potential sum: the window must contain
// every site within Euclidean distance `cutoff` of the cube's projection and
// tail_bound(cutoff) must not exceed `tail_tol`.
struct Truncation {
  double cutoff = 0.0;
  double tail_tol = 1e-8;
};

// H = -Delta + g V + U restricted to a cube (Dirichlet: constant diagonal 2Nd,
// links leaving the cube dropped).
class FiniteVolumeOperator {
 public:
  FiniteVolumeOperator(MultiCube cube, std::vector<MultiPoint> sites, SparseMatrix matrix, double coupling);

  const MultiCube& cube() const { return cube_; }
  std::size_t dim() const { return sites_.size(); }
  const std::vector<MultiPoint>& sites() const { return sites_; }
  // Index of a site in lexicographic order; throws kDomain if absent.
  std::size_t index_of(const MultiPoint& x) const;
  const SparseMatrix& matrix() const { return matrix_; }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix_); }
  Eigen::VectorXd diagonal() const { return matrix_.diagonal(); }
  double coupling() const { return coupling_; }
  // Max absolute column sum.
  double norm1() const;

 private:
  MultiCube cube_;
  std::vector<MultiPoint> sites_;
  SparseMatrix matrix_;
  double coupling_;
};

// Throws TruncationError if `truncation` is given and not honoured.
FiniteVolumeOperator assemble(const MultiCube& cube, const DisorderConfig& config, const Staircase& staircase,
                              const InteractionParams& interaction, double coupling,
                              const std::optional<Truncation>& truncation = std::nullopt);

// Assembly from precomputed one-particle potentials on projection(cube).
FiniteVolumeOperator assemble_from_potential(const MultiCube& cube, const std::vector<LatticePoint>& projection_sites,
                                             const std::vector<double>& potential,
                                             const InteractionParams& interaction, double coupling);

struct ProjectionPair {
  FiniteVolumeOperator first;
  FiniteVolumeOperator second;
};

// One-particle operators on the two projections of a non-interactive cube; the
// 2-particle spectrum is their Minkowski sum. Throws kNotNonInteractive for PI
// cubes and kRangeViolation when the two-body term can be nonzero on the cube.
ProjectionPair assemble_projections(const MultiCube& cube, const DisorderConfig& config, const Staircase& staircase,
                                    const InteractionParams& interaction, double coupling,
                                    const std::optional<Truncation>& truncation = std::nullopt);

// Throws TruncationError unless the window covers the cutoff around `cube`.
void check_truncation(const MultiCube& cube, const DisorderConfig& config, const Staircase& staircase,
                      const Truncation& truncation);

}  // namespace stairloc
