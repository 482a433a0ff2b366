#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stairloc/disorder.hpp"
#include "stairloc/geometry.hpp"
#include "stairloc/staircase.hpp"
#include "stairloc/stats.hpp"

namespace stairloc {

inline constexpr std::int64_t kUnbounded = -1;

// S = sum_{n=M}^{N} a_n sum_{k=1}^{K_n} X_{n,k} with IID X.
//   abstract: a_n = n^{-A},   K_n = ceil(c n^{d-1})
//   lattice:  a_n = r_n^{-A}, K_n = |shell_sites(S, n)|
// An unbounded sum keeps shells M..max_shell in the table and bounds the
// rest through tail_weight().
class ShellSum {
 public:
  enum class Source { kAbstract, kLattice };

  static ShellSum abstract(double c, int dim, double decay, std::int64_t first, std::int64_t last,
                           std::int64_t max_shell = 4096);
  static ShellSum lattice(const Staircase& staircase, std::vector<LatticePoint> centers, std::int64_t first,
                          std::int64_t last, std::int64_t max_shell = 1024);

  Source source() const { return source_; }
  std::int64_t first() const { return first_; }
  // kUnbounded for an infinite sum.
  std::int64_t last() const { return last_; }
  bool bounded() const { return last_ != kUnbounded; }
  // Last tabulated shell.
  std::int64_t table_last() const { return first_ + static_cast<std::int64_t>(amplitude_.size()) - 1; }
  std::size_t shells() const { return amplitude_.size(); }

  double amplitude(std::int64_t n) const { return amplitude_[static_cast<std::size_t>(n - first_)]; }
  std::int64_t count(std::int64_t n) const { return count_[static_cast<std::size_t>(n - first_)]; }
  std::int64_t total_count() const;

  // Upper bound on sum_{n > after} K_n a_n^power (power 1 or 2); zero past a finite end.
  double tail_weight(std::int64_t after, int power) const;

  // Restriction to shells [m, n] of the table.
  ShellSum slice(std::int64_t m, std::int64_t n) const;

 private:
  Source source_ = Source::kAbstract;
  std::int64_t first_ = 1;
  std::int64_t last_ = 1;
  std::vector<double> amplitude_;
  std::vector<std::int64_t> count_;
  // abstract
  double c_ = 1.0;
  int dim_ = 1;
  double decay_ = 3.0;
  // lattice
  StaircaseParams stair_{};
  std::size_t centers_ = 1;
  std::array<double, 2> tail_{0.0, 0.0};  // beyond the table, powers 1 and 2
};

// Number of lattice points x in Z^d with |x|_2^2 < bound (exact, O(R^{d-1})).
std::int64_t lattice_ball_count(int dim, std::int64_t bound);

// K_n = #{x : r_n <= |x|_2 < r_{n+1}} around a single site for n = first..last.
// OpenMP over shells; the serial variant is the reference.
std::vector<std::int64_t> origin_shell_counts(const Staircase& staircase, std::int64_t first, std::int64_t last);
std::vector<std::int64_t> origin_shell_counts_serial(const Staircase& staircase, std::int64_t first,
                                                     std::int64_t last);

// log|phi_X(s)| for one atomic law, accurate for small s (log1p of the
// 1 - |phi|^2 expansion in sin^2).
double log_abs_atom_charfn(std::span<const Atom> atoms, double s);
std::complex<double> atom_charfn(std::span<const Atom> atoms, double s);


// log|phi_S(t)| = sum_n K_n log|phi_X(a_n t)|. Throws kUnsupported for a
// non-atomic law and TruncationError if the table is too short for t.
double log_abs_charfn(const ShellSum& sum, const AmplitudeDistribution& dist, double t);
std::vector<double> log_abs_charfn(const ShellSum& sum, const AmplitudeDistribution& dist,
                                   std::span<const double> ts);
std::vector<double> log_abs_charfn_serial(const ShellSum& sum, const AmplitudeDistribution& dist,
                                          std::span<const double> ts);

// phi_S(t) over the tabulated shells (the truncated sum).
std::complex<double> charfn(const ShellSum& sum, const AmplitudeDistribution& dist, double t);

double mean(const ShellSum& sum, const AmplitudeDistribution& dist);
// Exact for bounded sums.
double variance(const ShellSum& sum, const AmplitudeDistribution& dist);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  // Sliding-window regressions over window_decades of log10 t.
  std::vector<double> window_center;  // log10 t at the window midpoint
  std::vector<double> local_slope;
  std::vector<double> t;              // points kept
  std::vector<double> minus_log_abs;  // -log|phi| at those points
  std::size_t dropped = 0;            // points where |phi| was 0 or 1 to machine precision
};

// Fit of log(-log|phi|) against log t. Points with -log|phi| not finite and
// positive are dropped and counted.
DecayFit fit_decay_exponent(std::span<const double> t, std::span<const double> minus_log_abs,
                            double window_decades = 1.0);
DecayFit decay_exponent_fit(const ShellSum& sum, const AmplitudeDistribution& dist, std::span<const double> t_grid,
                            double window_decades = 1.0);

struct DensityResult {
  std::vector<double> v;
  std::vector<double> density;
  double t_max = 0.0;
  double step = 0.0;
  double quadrature_error = 0.0;     // max |rho_h - rho_{2h}|
  double truncation_error = 0.0;     // (1/pi) int_{t_max}^{2 t_max} |phi| dt, trapezoid
  double location_uncertainty = 0.0; // max shift from shells beyond the table
};

// rho(v) = (1/2pi) int_{-T}^{T} phi(t) e^{-itv} dt by the trapezoid rule.
// Throws TruncationError unless |phi(T)| <= 1e-12.
DensityResult density_reconstruct(const ShellSum& sum, const AmplitudeDistribution& dist,
                                  std::span<const double> v_grid, double t_max);

// Law of a bounded shell sum: exact (shell-compressed enumeration over the
// per-shell atom counts) or sampled.
class ShellDistribution {
 public:
  static ShellDistribution exact(const ShellSum& sum, const AmplitudeDistribution& dist,
                                 std::uint64_t budget = std::uint64_t{1} << 22);
  static ShellDistribution sampled(const ShellSum& sum, const AmplitudeDistribution& dist, std::size_t samples,
                                   std::uint64_t seed);
  // Exact when the compressed configuration count fits the budget, sampled otherwise.
  static ShellDistribution build(const ShellSum& sum, const AmplitudeDistribution& dist, std::size_t samples,
                                 std::uint64_t seed, std::uint64_t budget = std::uint64_t{1} << 22);

  bool is_exact() const { return exact_; }
  std::size_t samples() const { return samples_; }
  std::uint64_t configurations() const { return configurations_; }
  double min_value() const { return values_.front(); }
  double max_value() const { return values_.back(); }
  // Distinct values (exact) or sorted draws (sampled).
  std::span<const double> support_points() const { return values_; }

  // P(lo <= S <= hi); endpoints widened by 1e-12 max(1, |S|max) to absorb summation order.
  BinomialEstimate interval(double lo, double hi) const;
  double probability(double lo, double hi) const { return interval(lo, hi).p; }

 private:
  bool exact_ = true;
  std::size_t samples_ = 0;
  std::uint64_t configurations_ = 0;
  std::vector<double> values_;      // sorted
  std::vector<double> cumulative_;  // cumulative_[i] = P(S <= values_[i]) for exact laws
};

// P(S in [a, a + eps]).
BinomialEstimate small_interval_prob(const ShellDistribution& law, double a, double eps);
// sup over a of P(S in [a, a + eps]), attained at a support point.
BinomialEstimate max_interval_prob(const ShellDistribution& law, double eps);
// P(S <= v_* + lambda), v_* the smallest possible value.
BinomialEstimate edge_tail(const ShellDistribution& law, const ShellSum& sum, const AmplitudeDistribution& dist,
                           double lambda);

// One draw of a bounded sum; amplitude of site k of shell n is derived from
// (seed, (n, k), trial) so draws are reproducible individually.
double sample_shell_sum(const ShellSum& sum, const AmplitudeDistribution& dist, std::uint64_t seed,
                        std::uint64_t trial);

// (1/n) sum_j exp(i t S_j).
std::vector<std::complex<double>> empirical_charfn(std::span<const double> samples, std::span<const double> ts);

}  // namespace stairloc
