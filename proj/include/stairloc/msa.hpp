#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stairloc/disorder.hpp"
#include "stairloc/geometry.hpp"
#include "stairloc/operator.hpp"
#include "stairloc/potential.hpp"
#include "stairloc/spectral.hpp"
#include "stairloc/staircase.hpp"
#include "stairloc/stats.hpp"

namespace stairloc {

struct ScheduleParams {
  std::int64_t L0 = 3;
  double alpha = 1.5;
  double tau = 1.2;
  double m = 0.5;
  double b = 1.0;
  double gamma = 0.1;
  int K = 2;
  double S = 1.0;
  int k_max = 2;
  int particles = 2;
  StaircaseParams staircase{};
};

struct ScaleRow {
  int k = 0;
  std::int64_t L = 0;
  double m_k = 0.0;
  double eps_k = 0.0;
  double delta_k = 0.0;
};

struct ConstraintCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

// L_k = floor(L_{k-1}^alpha), m_k = (1 + L_k^{-1/8}) m,
// eps_k = 4 L_k^{-(A - d/2) tau}, delta_k = exp(-m_k L_k).
class ScaleSchedule {
 public:
  explicit ScaleSchedule(ScheduleParams params);

  const ScheduleParams& params() const { return params_; }
  const std::vector<ScaleRow>& rows() const { return rows_; }
  const ScaleRow& row(int k) const { return rows_.at(static_cast<std::size_t>(k)); }
  // Every asymptotic constraint with its verdict; the table itself must be monotone regardless.
  const std::vector<ConstraintCheck>& checks() const { return checks_; }
  bool satisfied() const;
  // Throws kConfig unless satisfied() or `override_constraints`.
  void require_valid(bool override_constraints) const;

  // Derived quantities reported alongside the checks.
  double s_exponent() const;   // (A - N d) tau - (A + N d + 1)
  double sigma() const;        // gamma / (N d)
  double beta_kappa() const;   // kappa / (kappa - 1)

 private:
  ScheduleParams params_;
  std::vector<ScaleRow> rows_;
  std::vector<ConstraintCheck> checks_;
};

struct NsResult {
  bool nonsingular = false;
  bool resonant = false;
  double max_green = 0.0;  // max over core x, inner-boundary y of |G(x, y; E)|
  double delta = 0.0;
  double distance = 0.0;   // dist(E, spectrum)
};

struct NrResult {
  bool nonresonant = false;
  double distance = 0.0;
  double eps = 0.0;
  double margin() const { return distance - eps; }
};

// Throws kDegenerateCore when L < 3.
NsResult is_nonsingular(const FiniteVolumeOperator& op, double energy, double delta);
NrResult is_nonresonant(const FiniteVolumeOperator& op, double energy, double eps);

// N g tail_bound(L^tau - L): how far the cube's potential can move when
// amplitudes outside the tau-enlarged projection vary in [0, 1].
double outside_influence_bound(const MultiCube& cube, double tau, double coupling, const Staircase& staircase);

// Integer radius floor(L^tau) of the enlarged cubes.
int enlarged_radius(int radius, double tau);

enum class Tier { kCertified, kSampled, kFailed };
const char* to_string(Tier tier);

struct Certification {
  Tier tier = Tier::kFailed;
  bool fallback_only = false;  // perturbation certificate impossible (gamma * bound >= 1)
  double bound = 0.0;
  double margin = 0.0;         // slack of the deterministic test (negative when it fails)
  std::size_t sampled = 0;
  bool sampled_all_pass = false;
};

// Operator with one draw of the amplitudes outside the enlarged cube.
using OutsideSampler = std::function<FiniteVolumeOperator(std::uint64_t trial)>;

inline constexpr std::size_t kDefaultStabilityTrials = 32;

// op0 has all outside amplitudes set to zero.
Certification certify_snr(const FiniteVolumeOperator& op0, double energy, double eps, double bound,
                          const OutsideSampler& sampler = {}, std::size_t trials = kDefaultStabilityTrials);
Certification certify_sns(const FiniteVolumeOperator& op0, double energy, double delta, double bound,
                          const OutsideSampler& sampler = {}, std::size_t trials = kDefaultStabilityTrials);

// 2-particle sub-cubes of the given radius centred on a stride grid around
// the big cube's centres, kept inside it, that are partially interactive.
std::vector<MultiCube> pi_subcubes(const MultiCube& big, int radius, int stride);
std::vector<MultiCube> ni_subcubes(const MultiCube& big, int radius, int stride);

// Distance between cube centres as points of Z^{Nd} (sup-norm).
int center_distance(const MultiCube& a, const MultiCube& b);

// Greedy selection, most severe first, of cubes with pairwise centre distance > min_distance.
std::vector<std::size_t> greedy_distant_set(std::span<const MultiCube> cubes, std::span<const double> severity,
                                            double min_distance);
// Size of a largest such set by exhaustive search (at most 24 cubes).
std::size_t exhaustive_distant_set_size(std::span<const MultiCube> cubes, double min_distance);

struct SubcubeVerdict {
  bool singular = false;
  double severity = 0.0;  // larger = more singular
};

struct SGoodResult {
  bool s_good = true;
  std::size_t candidates = 0;
  std::size_t singular = 0;
  std::size_t largest_set = 0;
  bool exact = true;  // largest_set verified exhaustively
};

constexpr std::size_t kExhaustiveLimit = 12;

SGoodResult s_good_check(const MultiCube& big, int radius, int K, double tau, int stride,
                         const std::function<SubcubeVerdict(const MultiCube&)>& classify);

struct NiCheck {
  bool ok = true;
  bool snr = true;
  bool ns_checked = true;  // false for projections with L < 3
  double distance = 0.0;   // dist(E, Sigma' + Sigma'')
  // First failure: the eigenvalue and the side ("product", "first", "second").
  double witness_lambda = 0.0;
  std::string witness_side;
};

// With bound = 0 the NS conditions are checked directly; otherwise through the
// stability certificate at that bound.
NiCheck ni_nonsingular_check(const MultiCube& cube, const DisorderConfig& config, const Staircase& staircase,
                             double coupling, double energy, double delta, double eps, double bound = 0.0);

// Everything needed to draw and assemble cubes for the MSA driver.
struct MsaModel {
  Staircase staircase{StaircaseParams{}};
  InteractionParams interaction{};
  AmplitudeDistribution distribution = AmplitudeDistribution::bernoulli(0.5);
  double coupling = 1.0;
  LatticePoint u1 = LatticePoint::origin(1);
  LatticePoint u2 = LatticePoint::origin(1);
  int stride = 0;                          // 0 -> L_{k-1}
  std::size_t stability_trials = kDefaultStabilityTrials;
  int outside_shell = 0;                   // extra radius sampled beyond the enlarged cube; 0 -> L
};

struct MsaTrial {
  int k = 0;
  std::uint64_t trial = 0;
  bool valid = true;
  std::string error;
  bool sns = false;
  Tier sns_tier = Tier::kFailed;
  Tier snr_tier = Tier::kFailed;
  bool ns = false;
  double max_green = 0.0;
  double distance = 0.0;
  bool cause_not_snr = false;
  bool cause_ni_singular = false;
  bool cause_not_s_good = false;
  std::size_t largest_singular_set = 0;
  bool audit_violation = false;  // (i)-(iii) hold but the cube is not NS
};

struct MsaScale {
  ScaleRow row;
  std::size_t valid = 0;
  std::size_t invalid = 0;
  BinomialEstimate not_sns;
  std::size_t not_snr = 0;
  std::size_t ni_singular = 0;
  std::size_t not_s_good = 0;
  std::size_t certified_sns = 0;
  std::size_t sampled_sns = 0;
  std::size_t audit_hypotheses = 0;  // trials where (i)-(iii) all hold
  std::size_t audit_violations = 0;
};

struct MsaReport {
  std::vector<MsaScale> scales;
  std::vector<MsaTrial> trials;  // by scale, then trial index
};

// Seeds: trial t at scale k uses derive_seed(seed, k, t).
MsaTrial run_msa_trial(double energy, const ScaleSchedule& schedule, const MsaModel& model, int k,
                       std::uint64_t seed, std::uint64_t trial);
MsaReport run_fixed_energy_msa(double energy, const ScaleSchedule& schedule, std::size_t trials,
                               const MsaModel& model, std::uint64_t seed);

struct IlsResult {
  std::int64_t L0 = 0;
  double threshold = 0.0;  // L0^{-theta}
  BinomialEstimate low;    // P(E0 <= threshold)
  bool certified_infimum = true;
  double min_e0 = 0.0;
  std::vector<double> e0;  // per trial
};

struct IlsModel {
  Staircase staircase{StaircaseParams{}};
  InteractionParams interaction{};
  AmplitudeDistribution distribution = AmplitudeDistribution::bernoulli(0.5);
  double coupling = 1.0;
  int particles = 1;
  int dim = 1;
  std::size_t fallback_samples = 16;  // outside draws when the infimum is not certified
};

// P(inf over outside amplitudes of E0(B_{L0}) <= L0^{-theta}). With min atom 0
// the infimum is the all-zero outside configuration (eigenvalues are monotone
// in every amplitude); otherwise the minimum over sampled outside draws.
IlsResult ils_probe(std::int64_t L0, double theta, const IlsModel& model, std::size_t trials, std::uint64_t seed);

}  // namespace stairloc
