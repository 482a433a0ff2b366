#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stairloc/disorder.hpp"
#include "stairloc/geometry.hpp"
#include "stairloc/staircase.hpp"

namespace stairloc {

// Compactly supported two-body interaction: strength if |x1 - x2|_2 <= range.
struct InteractionParams {
  double range = 0.0;     // r0
  double strength = 0.0;  // u0, must be >= 0

  void validate() const;
};

// V(x) = sum over window sites y of u(|x - y|_2) * omega_y.
double cumulative_potential(const LatticePoint& x, const DisorderConfig& config, const Staircase& staircase);

// Batched V over many points; OpenMP over points. The serial variant is the
// reference used by tests and the benchmark.
std::vector<double> cumulative_potential(std::span<const LatticePoint> xs, const DisorderConfig& config,
                                         const Staircase& staircase);
std::vector<double> cumulative_potential_serial(std::span<const LatticePoint> xs, const DisorderConfig& config,
                                                const Staircase& staircase);

// Certified upper bound on sum_{|y - x|_2 >= R} u(|y - x|) for amplitudes <= 1.
// Lattice points with R <= |y| < W are summed exactly (W chosen from a point
// budget); beyond W, u(r) <= C_W r^{-A} with
//   C_W = ((k+1)^kappa / (k^kappa - 1))^A,   k = plateau index of W >= 2,
// and the lattice sum of r^{-A} over |y| >= W is bounded by comparison with
// the integral over unit cells:
//   S_{d-1} (1 + h/s0)^{d-1} s0^{d-A} / (A - d),  h = sqrt(d)/2, s0 = W - 2h,
// where S_{d-1} is the area of the unit sphere (2, 2 pi, 4 pi).
double tail_bound(const Staircase& staircase, double radius);

// Smallest integer radius R >= 1 with tail_bound(R) <= tol.
double certified_cutoff(const Staircase& staircase, double tol);

// Two-body energy of a configuration point (zero for a single particle).
double interaction_energy(const MultiPoint& x, const InteractionParams& params);

struct ConstantScatterer {
  LatticePoint site;
  std::int64_t plateau = 0;  // k with u = r_k^{-A} on the whole set
  double value = 0.0;
};

// Sites x in shells n_first..n_last around S whose interaction u(|x - y|) takes
// the same plateau for every y in S.
std::vector<ConstantScatterer> constant_scatterers(std::span<const LatticePoint> set, std::int64_t n_first,
                                                   std::int64_t n_last, const Staircase& staircase);

struct XiDecomposition {
  double xi = 0.0;
  std::vector<LatticePoint> constant_sites;
  std::vector<double> constant_contribution;  // per constant site, the summed plateau values over projections
  std::vector<double> potential;              // V(x) = sum_j V(x_j) on sites(cube), summed over all window sites
  std::vector<double> residual;               // summed over non-constant window sites only
};

// Splits the window into sites whose induced N-particle potential is constant
// on the cube (summed into xi) and the rest. n_max > 0 restricts constant
// candidates to dist(y, projection) < r_{n_max + 1}.
XiDecomposition xi_decompose(const MultiCube& cube, const DisorderConfig& config, const Staircase& staircase,
                             std::int64_t n_max = 0);

// Plateau index of u(|x - y|) if it is the same for every x in the cube, else -1.
std::int64_t constant_plateau_on_cube(const Cube& cube, const LatticePoint& y, const Staircase& staircase);

}  // namespace stairloc
