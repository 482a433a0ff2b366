#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "stairloc/operator.hpp"

namespace stairloc {

inline constexpr std::size_t kDenseThreshold = 4096;

enum class SolverMethod { kDense, kIterative };
const char* to_string(SolverMethod method);

// Eigenvalues ascending; eigenvectors (if requested) as orthonormal columns.
struct SpectrumResult {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd eigenvectors;
  bool has_vectors = false;
  SolverMethod method = SolverMethod::kDense;
  double max_residual = 0.0;  // max ||H v - lambda v||_2 over returned pairs
};

// Residual bound used for eigenpairs and resolvent solves: 1e-10 * max(1, ||H||_1).
double residual_tolerance(double norm1);
double norm1(const SparseMatrix& h);

// Dense symmetric solve. Throws kTooLarge above the threshold.
SpectrumResult full_spectrum(const SparseMatrix& h, bool want_vectors, std::size_t dense_threshold = kDenseThreshold);
SpectrumResult full_spectrum(const FiniteVolumeOperator& op, bool want_vectors,
                             std::size_t dense_threshold = kDenseThreshold);

struct LanczosOptions {
  std::size_t max_krylov = 160;
  int max_restarts = 80;
  std::uint64_t seed = 0x5eed1a2c05ull;
};

// k smallest eigenpairs by restarted Lanczos with full reorthogonalisation.
// Converged pairs are locked and later runs work in their orthogonal
// complement, which recovers repeated eigenvalues; a final run in the
// complement confirms nothing lies below the k-th value. Throws
// ConvergenceError (carrying the best residual) when a run stalls.
SpectrumResult lowest_eigenpairs(const SparseMatrix& h, std::size_t k, const LanczosOptions& options = {});

// Lowest eigenpairs of an abstract symmetric map on R^n.
using LinearMap = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;
SpectrumResult lowest_eigenpairs(const LinearMap& apply, Eigen::Index n, std::size_t k, double tolerance,
                                 const LanczosOptions& options = {});

// Distance from E to the spectrum with an error bar (zero on the dense path).
struct DistanceEstimate {
  double value = 0.0;
  double error = 0.0;
  SolverMethod method = SolverMethod::kDense;
};

DistanceEstimate distance_estimate(const SparseMatrix& h, double energy, std::size_t dense_threshold = kDenseThreshold);
double dist_to_spectrum(const SparseMatrix& h, double energy, std::size_t dense_threshold = kDenseThreshold);
double dist_to_spectrum(std::span<const double> eigenvalues, double energy);
// dist >= eps, refusing (kUncertainty) when the error bar straddles eps.
bool distance_at_least(const SparseMatrix& h, double energy, double eps, std::size_t dense_threshold = kDenseThreshold);

// G(E) = (H - E)^{-1}. Dense: built from an eigensystem. Sparse: LU of H - E.
// Construction throws ResonantEnergyError if dist(E, spectrum) <= 1e-12 ||H||_1.
class Resolvent {
 public:
  Resolvent(const SparseMatrix& h, std::shared_ptr<const SpectrumResult> eigensystem, double energy);
  Resolvent(const SparseMatrix& h, double energy, std::size_t dense_threshold = kDenseThreshold);
  ~Resolvent();
  Resolvent(Resolvent&&) noexcept;
  Resolvent& operator=(Resolvent&&) noexcept;

  double energy() const { return energy_; }
  double distance() const { return distance_; }
  // Operator norm ||G(E)|| = 1 / dist.
  double norm() const { return 1.0 / distance_; }
  // Column y of G, with ||(H - E) g - delta_y|| <= 1e-10 max(1, ||H - E||_1 ||g||) enforced.
  Eigen::VectorXd column(Eigen::Index y) const;
  double entry(Eigen::Index x, Eigen::Index y) const { return column(y)(x); }
  // G restricted to rows x cols (one solve per column on the sparse path).
  Eigen::MatrixXd block(std::span<const Eigen::Index> rows, std::span<const Eigen::Index> cols) const;

  struct SparseFactor;

 private:
  SparseMatrix h_;
  double energy_;
  double distance_ = 0.0;
  double shifted_norm_ = 0.0;
  std::shared_ptr<const SpectrumResult> eig_;
  std::unique_ptr<SparseFactor> lu_;
};

double green_entry(const SparseMatrix& h, double energy, Eigen::Index x, Eigen::Index y);

struct EnergyInterval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static EnergyInterval all() { return {}; }
  bool empty() const { return !(lo <= hi); }
  bool contains(double e) const { return e >= lo && e <= hi; }
};

// sum over eigenvalues in I of |psi(x)| |psi(y)|; eigenvalues closer than
// 1e-10 max(1, |lambda|) are grouped and contribute |P x| |P y| for the
// projector P onto their span. Requires eigenvectors.
double ef_correlator(const SpectrumResult& spectrum, const EnergyInterval& interval, Eigen::Index x, Eigen::Index y);

// min |a_i - b_j| for ascending inputs (two-pointer sweep).
double min_spectral_gap(std::span<const double> a, std::span<const double> b);

}  // namespace stairloc
