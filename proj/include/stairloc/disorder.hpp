#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "stairloc/geometry.hpp"

namespace stairloc {

struct Atom {
  double value = 0.0;
  double probability = 0.0;
};

struct BernoulliLaw {
  double p = 0.5;
};
struct UniformLaw {};
struct AtomicLaw {
  std::vector<Atom> atoms;  // sorted by value
};

// Single-site amplitude law on [0, 1].
class AmplitudeDistribution {
 public:
  static AmplitudeDistribution bernoulli(double p);
  static AmplitudeDistribution uniform();
  static AmplitudeDistribution atoms(std::vector<Atom> atoms);

  // Throws kConfig on out-of-range atoms, bad normalisation, or (when
  // require_nontrivial) a law concentrated on a single point.
  void validate(bool require_nontrivial = true) const;

  // Inverse CDF at u in [0, 1). Bernoulli(p): 1 iff u < p.
  double quantile(double u) const;

  bool is_atomic() const { return !std::holds_alternative<UniformLaw>(law_); }
  // Atoms with positive probability, sorted by value. Throws kUnsupported for Uniform.
  std::vector<Atom> support() const;

  double min_value() const;
  double max_value() const;
  double mean() const;
  double variance() const;
  std::string describe() const;

 private:
  std::variant<BernoulliLaw, UniformLaw, AtomicLaw> law_;
};

// Identifier of the site hash; part of the reproducibility contract.
inline constexpr const char* kSiteHashId = "splitmix64-chain/v1";

// 64-bit avalanche hash of (seed, trial, coordinates): SplitMix64 finaliser
// applied after absorbing each word.
std::uint64_t site_hash(std::uint64_t seed, const LatticePoint& site, std::uint64_t trial);
// Top 53 bits mapped to [0, 1).
double unit_interval(std::uint64_t h);
// Stream-free derivation of a sub-seed from (seed, a, b).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// Amplitudes on a finite window. Every site's value is a pure function of
// (master seed, site, trial of that site), so any subset can be re-derived in
// isolation and resampling a region leaves the complement bit-identical.
class DisorderConfig {
 public:
  DisorderConfig() = default;

  static DisorderConfig sample(std::vector<LatticePoint> window, const AmplitudeDistribution& dist,
                               std::uint64_t master_seed);
  // Explicit amplitudes (enumeration oracles, forced extremes).
  static DisorderConfig from_values(std::vector<LatticePoint> window, std::vector<double> amplitudes);

  // New draws h(seed, y, trial) on `region`; everything else is kept. Throws
  // kDomain unless region is inside the window.
  DisorderConfig resample_region(std::span<const LatticePoint> region, std::uint64_t trial) const;
  // Overwrites the given sites with explicit values.
  DisorderConfig with_values(std::span<const LatticePoint> region, std::span<const double> values) const;
  // Sets every site outside `keep` to `value`.
  DisorderConfig fill_outside(std::span<const LatticePoint> keep, double value) const;

  const std::vector<LatticePoint>& window() const { return window_; }
  std::span<const double> amplitudes() const { return amplitudes_; }
  std::optional<double> amplitude(const LatticePoint& site) const;
  bool contains(const LatticePoint& site) const { return index_.count(site) != 0; }
  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t trial_of(const LatticePoint& site) const;
  std::size_t size() const { return window_.size(); }

 private:
  void build_index();

  std::vector<LatticePoint> window_;  // sorted
  std::vector<double> amplitudes_;
  std::vector<std::uint64_t> trials_;
  std::unordered_map<LatticePoint, std::size_t, LatticePointHash> index_;
  std::uint64_t master_seed_ = 0;
  std::shared_ptr<const AmplitudeDistribution> dist_;
};

// Union of sup-norm cubes of the given radius around each center, sorted.
std::vector<LatticePoint> window_around(std::span<const LatticePoint> centers, int radius);

// Odometer over all assignments of atoms to `sites` sites, with product weights.
//   ConfigEnumerator e(n, atoms);
//   while (e.next()) use(e.values(), e.weight());
class ConfigEnumerator {
 public:
  static constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 22;

  ConfigEnumerator(std::size_t sites, std::vector<Atom> atoms, std::uint64_t budget = kDefaultBudget);

  bool next();
  std::span<const double> values() const { return values_; }
  double weight() const { return weight_; }
  std::uint64_t count() const { return count_; }

 private:
  std::vector<Atom> atoms_;
  std::vector<std::size_t> digits_;
  std::vector<double> values_;
  double weight_ = 0.0;
  std::uint64_t count_ = 0;
  bool started_ = false;
  bool done_ = false;
};

}  // namespace stairloc
