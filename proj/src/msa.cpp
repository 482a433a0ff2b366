#include "stairloc/msa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

#include "stairloc/errors.hpp"
#include "stairloc/parallel.hpp"

namespace stairloc {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::vector<Eigen::Index> indices_of(const FiniteVolumeOperator& op, const std::vector<MultiPoint>& pts) {
  std::vector<Eigen::Index> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(static_cast<Eigen::Index>(op.index_of(p)));
  return out;
}

// Spectral data reused across the tests of one cube.
struct CubeSolver {
  const FiniteVolumeOperator* op = nullptr;
  std::shared_ptr<const SpectrumResult> eig;  // dense path only
  std::vector<Eigen::Index> core;
  std::vector<Eigen::Index> boundary;

  explicit CubeSolver(const FiniteVolumeOperator& o) : op(&o) {
    if (o.dim() <= kDenseThreshold) eig = std::make_shared<const SpectrumResult>(full_spectrum(o.matrix(), true));
  }

  void prepare_ns() {
    if (!core.empty()) return;
    core = indices_of(*op, sites(stairloc::core(op->cube())));
    boundary = indices_of(*op, inner_boundary(op->cube()));
  }

  double distance(double energy) const {
    if (eig) return dist_to_spectrum(eig->eigenvalues, energy);
    return dist_to_spectrum(op->matrix(), energy);
  }

  NsResult ns(double energy, double delta) {
    prepare_ns();
    NsResult r;
    r.delta = delta;
    try {
      const Resolvent g = eig ? Resolvent(op->matrix(), eig, energy) : Resolvent(op->matrix(), energy);
      r.distance = g.distance();
      r.max_green = g.block(core, boundary).cwiseAbs().maxCoeff();
      r.nonsingular = r.max_green <= delta;
    } catch (const ResonantEnergyError& e) {
      r.resonant = true;
      r.distance = e.distance();
      r.max_green = std::numeric_limits<double>::infinity();
      r.nonsingular = false;
    }
    return r;
  }
};

// Deterministic part of the SNS test: NS of op0 plus the resolvent perturbation bound.
Certification sns_from(const NsResult& ns, double delta, double bound) {
  Certification c;
  c.bound = bound;
  if (!ns.nonsingular) {
    c.tier = Tier::kFailed;
    c.margin = ns.resonant ? -std::numeric_limits<double>::infinity() : delta - ns.max_green;
    return c;
  }
  const double gamma = 1.0 / ns.distance;
  if (gamma * bound < 1.0) {
    const double extra = gamma * gamma * bound / (1.0 - gamma * bound);
    c.margin = delta - ns.max_green - extra;
    c.tier = c.margin >= 0.0 ? Tier::kCertified : Tier::kFailed;
  } else {
    c.fallback_only = true;
    c.margin = -std::numeric_limits<double>::infinity();
    c.tier = Tier::kFailed;
  }
  return c;
}

void sample_sns(Certification& c, const OutsideSampler& sampler, std::size_t trials, double energy, double delta) {
  c.sampled_all_pass = true;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto op = sampler(t);
    CubeSolver s(op);
    ++c.sampled;
    if (!s.ns(energy, delta).nonsingular) {
      c.sampled_all_pass = false;
      break;
    }
  }
  c.tier = c.sampled_all_pass ? Tier::kSampled : Tier::kFailed;
}

}  // namespace

ScaleSchedule::ScaleSchedule(ScheduleParams params) : params_(std::move(params)) {
  const auto& p = params_;
  p.staircase.validate();
  if (p.L0 < 2) throw Error(ErrorKind::kConfig, "schedule: L0 must be >= 2");
  if (!(p.alpha > 1.0)) throw Error(ErrorKind::kConfig, "schedule: alpha must exceed 1");
  if (!(p.tau >= 1.0)) throw Error(ErrorKind::kConfig, "schedule: tau must be >= 1");
  if (!(p.m > 0.0)) throw Error(ErrorKind::kConfig, "schedule: m must be positive");
  if (p.k_max < 0) throw Error(ErrorKind::kConfig, "schedule: k_max must be >= 0");
  if (p.particles != 1 && p.particles != 2) throw Error(ErrorKind::kConfig, "schedule: particles must be 1 or 2");
  if (p.K < 1) throw Error(ErrorKind::kConfig, "schedule: K must be >= 1");
  const double d = p.staircase.dim;
  const double a = p.staircase.decay;
  std::int64_t L = p.L0;
  for (int k = 0; k <= p.k_max; ++k) {
    if (k > 0) {
      const std::int64_t next = floor_power(L, p.alpha);
      if (next <= L) {
        throw Error(ErrorKind::kConfig, "schedule: L_k not strictly increasing at k=" + std::to_string(k));
      }
      L = next;
    }
    const double ld = static_cast<double>(L);
    ScaleRow row;
    row.k = k;
    row.L = L;
    row.m_k = (1.0 + std::pow(ld, -0.125)) * p.m;
    row.eps_k = 4.0 * std::pow(ld, -(a - d / 2.0) * p.tau);
    row.delta_k = std::exp(-row.m_k * ld);
    rows_.push_back(row);
  }

  const double nd = p.particles * d;
  auto add = [this](std::string name, bool ok, std::string detail) {
    checks_.push_back({std::move(name), ok, std::move(detail)});
  };
  add("alpha > tau", p.alpha > p.tau, fmt(p.alpha) + " vs " + fmt(p.tau));
  add("tau > b/(A-d)", p.tau > p.b / (a - d), fmt(p.tau) + " vs " + fmt(p.b / (a - d)));
  if (p.b > p.alpha * d) {
    const double need = p.b * p.alpha / (p.b - p.alpha * d);
    add("S > b alpha/(b - alpha d)", p.S > need, fmt(p.S) + " vs " + fmt(need));
  } else {
    add("S > b alpha/(b - alpha d)", false, "b <= alpha d");
  }
  add("A > 2Nd + 3 gamma", a > 2.0 * nd + 3.0 * p.gamma, fmt(a) + " vs " + fmt(2.0 * nd + 3.0 * p.gamma));
  add("tau > 2 + A/(Nd)", p.tau > 2.0 + a / nd, fmt(p.tau) + " vs " + fmt(2.0 + a / nd));
  const double alpha_expected = (1.0 + sigma()) * p.tau;
  add("alpha = (1 + sigma) tau", std::abs(p.alpha - alpha_expected) <= 1e-9 * p.alpha,
      fmt(p.alpha) + " vs " + fmt(alpha_expected));
  add("s - alpha N d > gamma tau", s_exponent() - p.alpha * nd > p.gamma * p.tau,
      fmt(s_exponent() - p.alpha * nd) + " vs " + fmt(p.gamma * p.tau));
}

double ScaleSchedule::s_exponent() const {
  const double nd = params_.particles * params_.staircase.dim;
  const double a = params_.staircase.decay;
  return (a - nd) * params_.tau - (a + nd + 1.0);
}

double ScaleSchedule::sigma() const { return params_.gamma / (params_.particles * params_.staircase.dim); }

double ScaleSchedule::beta_kappa() const { return params_.staircase.kappa / (params_.staircase.kappa - 1.0); }

bool ScaleSchedule::satisfied() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const ConstraintCheck& c) { return c.ok; });
}

void ScaleSchedule::require_valid(bool override_constraints) const {
  if (satisfied() || override_constraints) return;
  std::string failed;
  for (const auto& c : checks_) {
    if (!c.ok) failed += (failed.empty() ? "" : "; ") + c.name + " (" + c.detail + ")";
  }
  throw Error(ErrorKind::kConfig, "schedule violates: " + failed + " (pass --override-constraints to run anyway)");
}

NsResult is_nonsingular(const FiniteVolumeOperator& op, double energy, double delta) {
  CubeSolver s(op);
  return s.ns(energy, delta);
}

NrResult is_nonresonant(const FiniteVolumeOperator& op, double energy, double eps) {
  NrResult r;
  r.eps = eps;
  r.distance = dist_to_spectrum(op.matrix(), energy);
  r.nonresonant = r.distance >= eps;
  return r;
}

int enlarged_radius(int radius, double tau) {
  if (radius <= 0) return 0;
  return static_cast<int>(floor_power(radius, tau));
}

double outside_influence_bound(const MultiCube& cube, double tau, double coupling, const Staircase& staircase) {
  const double L = cube.radius();
  const double reach = std::pow(L, tau) - L;
  if (!(std::pow(L, tau) > L + 1.0)) {
    throw Error(ErrorKind::kDomain, "outside_influence_bound: need L^tau > L + 1");
  }
  if (coupling == 0.0) return 0.0;
  return cube.particles() * coupling * tail_bound(staircase, reach);
}

const char* to_string(Tier tier) {
  switch (tier) {
    case Tier::kCertified: return "certified";
    case Tier::kSampled: return "sampled";
    case Tier::kFailed: return "failed";
  }
  return "unknown";
}

Certification certify_snr(const FiniteVolumeOperator& op0, double energy, double eps, double bound,
                          const OutsideSampler& sampler, std::size_t trials) {
  Certification c;
  c.bound = bound;
  const double dist = dist_to_spectrum(op0.matrix(), energy);
  c.margin = dist - eps - bound;
  if (dist < eps) {
    c.tier = Tier::kFailed;
    return c;
  }
  if (c.margin >= 0.0) {
    c.tier = Tier::kCertified;
    return c;
  }
  if (!sampler) {
    c.tier = Tier::kFailed;
    return c;
  }
  c.sampled_all_pass = true;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto op = sampler(t);
    ++c.sampled;
    if (dist_to_spectrum(op.matrix(), energy) < eps) {
      c.sampled_all_pass = false;
      break;
    }
  }
  c.tier = c.sampled_all_pass ? Tier::kSampled : Tier::kFailed;
  return c;
}

Certification certify_sns(const FiniteVolumeOperator& op0, double energy, double delta, double bound,
                          const OutsideSampler& sampler, std::size_t trials) {
  CubeSolver s(op0);
  const auto ns = s.ns(energy, delta);
  auto c = sns_from(ns, delta, bound);
  if (c.tier == Tier::kCertified || !ns.nonsingular || !sampler) return c;
  sample_sns(c, sampler, trials, energy, delta);
  return c;
}

namespace {

// Offsets m * stride (per axis) with |m * stride| <= reach.
std::vector<LatticePoint> grid_around(const LatticePoint& center, int reach, int stride) {
  std::vector<LatticePoint> out;
  const int d = center.dim();
  const int steps = reach / stride;
  LatticePoint lo = LatticePoint::origin(d);
  LatticePoint hi = LatticePoint::origin(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = -steps;
    hi[i] = steps;
  }
  for_each_in_box(lo, hi, [&](const LatticePoint& m) {
    LatticePoint p = center;
    for (int i = 0; i < d; ++i) p[i] += m[i] * stride;
    out.push_back(p);
  });
  return out;
}

std::vector<MultiCube> subcubes(const MultiCube& big, int radius, int stride, bool want_ni) {
  if (big.particles() != 2) return {};
  if (radius < 0 || radius > big.radius()) throw Error(ErrorKind::kDomain, "subcubes: radius outside [0, L]");
  if (stride < 1) throw Error(ErrorKind::kDomain, "subcubes: stride must be >= 1");
  const auto g1 = grid_around(big.center(0), big.radius() - radius, stride);
  const auto g2 = grid_around(big.center(1), big.radius() - radius, stride);
  std::vector<MultiCube> out;
  for (const auto& c1 : g1) {
    for (const auto& c2 : g2) {
      auto c = MultiCube::two(c1, c2, radius);
      if (is_non_interactive(c) == want_ni) out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::vector<MultiCube> pi_subcubes(const MultiCube& big, int radius, int stride) {
  return subcubes(big, radius, stride, false);
}

std::vector<MultiCube> ni_subcubes(const MultiCube& big, int radius, int stride) {
  return subcubes(big, radius, stride, true);
}

int center_distance(const MultiCube& a, const MultiCube& b) {
  int best = 0;
  for (int j = 0; j < a.particles(); ++j) best = std::max(best, sup_distance(a.center(j), b.center(j)));
  return best;
}

std::vector<std::size_t> greedy_distant_set(std::span<const MultiCube> cubes, std::span<const double> severity,
                                            double min_distance) {
  std::vector<std::size_t> order(cubes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return severity[a] > severity[b]; });
  std::vector<std::size_t> chosen;
  for (auto i : order) {
    bool far = true;
    for (auto j : chosen) {
      if (static_cast<double>(center_distance(cubes[i], cubes[j])) <= min_distance) {
        far = false;
        break;
      }
    }
    if (far) chosen.push_back(i);
  }
  return chosen;
}

std::size_t exhaustive_distant_set_size(std::span<const MultiCube> cubes, double min_distance) {
  const std::size_t n = cubes.size();
  if (n > 24) throw Error(ErrorKind::kTooLarge, "exhaustive_distant_set_size: at most 24 cubes");
  std::vector<std::uint32_t> conflict(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && static_cast<double>(center_distance(cubes[i], cubes[j])) <= min_distance) {
        conflict[i] |= std::uint32_t{1} << j;
      }
    }
  }
  std::size_t best = 0;
  const std::uint32_t total = n == 0 ? 1u : (std::uint32_t{1} << n);
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size <= best) continue;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if ((mask >> i & 1u) && (conflict[i] & mask)) ok = false;
    }
    if (ok) best = size;
  }
  return best;
}

SGoodResult s_good_check(const MultiCube& big, int radius, int K, double tau, int stride,
                         const std::function<SubcubeVerdict(const MultiCube&)>& classify) {
  SGoodResult r;
  const auto cubes = pi_subcubes(big, radius, stride);
  r.candidates = cubes.size();
  std::vector<MultiCube> bad;
  std::vector<double> severity;
  for (const auto& c : cubes) {
    const auto v = classify(c);
    if (v.singular) {
      bad.push_back(c);
      severity.push_back(v.severity);
    }
  }
  r.singular = bad.size();
  const double min_distance = std::pow(static_cast<double>(radius), tau);
  const auto greedy = greedy_distant_set(bad, severity, min_distance);
  r.largest_set = greedy.size();
  r.exact = false;
  if (bad.size() <= kExhaustiveLimit) {
    r.largest_set = exhaustive_distant_set_size(bad, min_distance);
    r.exact = true;
  }
  r.s_good = r.largest_set < static_cast<std::size_t>(K);
  return r;
}

NiCheck ni_nonsingular_check(const MultiCube& cube, const DisorderConfig& config, const Staircase& staircase,
                             double coupling, double energy, double delta, double eps, double bound) {
  const auto pair = assemble_projections(cube, config, staircase, InteractionParams{}, coupling);
  CubeSolver first(pair.first);
  CubeSolver second(pair.second);
  const auto& s1 = first.eig ? first.eig->eigenvalues : full_spectrum(pair.first.matrix(), false).eigenvalues;
  const auto& s2 = second.eig ? second.eig->eigenvalues : full_spectrum(pair.second.matrix(), false).eigenvalues;

  NiCheck r;
  r.distance = std::numeric_limits<double>::infinity();
  double nearest = 0.0;
  for (double a : s1) {
    const double target = energy - a;
    auto it = std::lower_bound(s2.begin(), s2.end(), target);
    for (auto jt : {it, it == s2.begin() ? it : it - 1}) {
      if (jt == s2.end()) continue;
      const double dd = std::abs(target - *jt);
      if (dd < r.distance) {
        r.distance = dd;
        nearest = a + *jt;
      }
    }
  }
  r.snr = r.distance >= 2.0 * eps + bound;
  if (!r.snr) {
    r.ok = false;
    r.witness_lambda = nearest;
    r.witness_side = "product";
    return r;
  }
  if (cube.radius() < 3) {
    r.ns_checked = false;
    return r;
  }
  auto passes = [&](CubeSolver& s, double e) {
    const auto ns = s.ns(e, delta);
    if (!ns.nonsingular) return false;
    if (bound == 0.0) return true;
    const double gamma = 1.0 / ns.distance;
    if (gamma * bound >= 1.0) return false;
    return ns.max_green + gamma * gamma * bound / (1.0 - gamma * bound) <= delta;
  };
  for (double a : s1) {
    if (!passes(second, energy - a)) {
      r.ok = false;
      r.witness_lambda = a;
      r.witness_side = "second";
      return r;
    }
  }
  for (double b : s2) {
    if (!passes(first, energy - b)) {
      r.ok = false;
      r.witness_lambda = b;
      r.witness_side = "first";
      return r;
    }
  }
  return r;
}

namespace {

MultiCube make_cube(const MsaModel& model, int particles, int radius) {
  if (particles == 2) return MultiCube::two(model.u1, model.u2, radius);
  return MultiCube::one(Cube{model.u1, radius});
}

std::vector<LatticePoint> centers_of(const MultiCube& cube) {
  std::vector<LatticePoint> c;
  for (int j = 0; j < cube.particles(); ++j) c.push_back(cube.center(j));
  return c;
}

std::vector<LatticePoint> set_difference(const std::vector<LatticePoint>& a, const std::vector<LatticePoint>& b) {
  std::vector<LatticePoint> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

MsaTrial run_msa_trial(double energy, const ScaleSchedule& schedule, const MsaModel& model, int k,
                       std::uint64_t seed, std::uint64_t trial) {
  const auto& p = schedule.params();
  const auto& row = schedule.row(k);
  MsaTrial out;
  out.k = k;
  out.trial = trial;
  try {
    const int L = static_cast<int>(row.L);
    const auto cube = make_cube(model, p.particles, L);
    const auto centers = centers_of(cube);
    const int big = enlarged_radius(L, p.tau);
    const int shell = model.outside_shell > 0 ? model.outside_shell : L;
    const auto inside = window_around(centers, big);
    const auto full_window = window_around(centers, big + shell);
    const auto outside = set_difference(full_window, inside);
    const auto full = DisorderConfig::sample(full_window, model.distribution, derive_seed(seed, static_cast<std::uint64_t>(k), trial));
    const auto config0 = full.fill_outside(inside, 0.0);
    const auto op0 = assemble(cube, config0, model.staircase, model.interaction, model.coupling);
    const double bound = outside_influence_bound(cube, p.tau, model.coupling, model.staircase);
    const OutsideSampler sampler = [&](std::uint64_t t) {
      return assemble(cube, full.resample_region(outside, t + 1), model.staircase, model.interaction, model.coupling);
    };

    CubeSolver solver(op0);
    const auto ns = solver.ns(energy, row.delta_k);
    out.ns = ns.nonsingular;
    out.max_green = ns.max_green;
    out.distance = ns.distance;

    const auto snr = certify_snr(op0, energy, row.eps_k, bound, sampler, model.stability_trials);
    out.snr_tier = snr.tier;
    auto sns = sns_from(ns, row.delta_k, bound);
    if (sns.tier != Tier::kCertified && ns.nonsingular) {
      sample_sns(sns, sampler, model.stability_trials, energy, row.delta_k);
    }
    out.sns_tier = sns.tier;
    out.sns = sns.tier != Tier::kFailed;
    out.cause_not_snr = snr.tier == Tier::kFailed;

    if (k >= 1 && p.particles == 2) {
      const auto& sub = schedule.row(k - 1);
      const int ell = static_cast<int>(sub.L);
      const int stride = model.stride > 0 ? model.stride : ell;
      for (const auto& c : ni_subcubes(cube, ell, stride)) {
        const auto check =
            ni_nonsingular_check(c, config0, model.staircase, model.coupling, energy, sub.delta_k, sub.eps_k);
        if (!check.ok) {
          out.cause_ni_singular = true;
          break;
        }
      }
      const auto classify = [&](const MultiCube& c) {
        const auto op = assemble(c, config0, model.staircase, model.interaction, model.coupling);
        CubeSolver s(op);
        const auto sub_ns = s.ns(energy, sub.delta_k);
        const double sub_bound = outside_influence_bound(c, p.tau, model.coupling, model.staircase);
        const auto cert = sns_from(sub_ns, sub.delta_k, sub_bound);
        SubcubeVerdict v;
        v.singular = cert.tier != Tier::kCertified;
        v.severity = sub_ns.max_green / sub.delta_k;
        return v;
      };
      const auto good = s_good_check(cube, ell, p.K, p.tau, stride, classify);
      out.largest_singular_set = good.largest_set;
      out.cause_not_s_good = !good.s_good;
      if (!out.cause_not_snr && !out.cause_ni_singular && !out.cause_not_s_good && !out.ns) {
        out.audit_violation = true;
      }
    }
  } catch (const Error& e) {
    if (e.exit_code() != ExitCode::kSolverFailure) throw;
    out.valid = false;
    out.error = e.what();
  }
  return out;
}

MsaReport run_fixed_energy_msa(double energy, const ScaleSchedule& schedule, std::size_t trials,
                               const MsaModel& model, std::uint64_t seed) {
  MsaReport report;
  if (trials == 0) return report;
  const auto& p = schedule.params();
  if (p.L0 < 3) throw Error(ErrorKind::kConfig, "msa: L0 must be >= 3 (the cube core needs L >= 3)");
  for (int k = 0; k <= p.k_max; ++k) {
    auto rows = parallel_map<MsaTrial>(trials, [&](std::size_t t) {
      return run_msa_trial(energy, schedule, model, k, seed, static_cast<std::uint64_t>(t));
    });
    MsaScale scale;
    scale.row = schedule.row(k);
    std::uint64_t bad = 0;
    for (const auto& r : rows) {
      if (!r.valid) {
        ++scale.invalid;
        continue;
      }
      ++scale.valid;
      if (!r.sns) ++bad;
      if (r.sns_tier == Tier::kCertified) ++scale.certified_sns;
      if (r.sns_tier == Tier::kSampled) ++scale.sampled_sns;
      if (r.cause_not_snr) ++scale.not_snr;
      if (r.cause_ni_singular) ++scale.ni_singular;
      if (r.cause_not_s_good) ++scale.not_s_good;
      if (k >= 1 && p.particles == 2 && !r.cause_not_snr && !r.cause_ni_singular && !r.cause_not_s_good) {
        ++scale.audit_hypotheses;
      }
      if (r.audit_violation) ++scale.audit_violations;
    }
    scale.not_sns = wilson_interval(bad, scale.valid);
    report.scales.push_back(scale);
    report.trials.insert(report.trials.end(), rows.begin(), rows.end());
  }
  return report;
}

IlsResult ils_probe(std::int64_t L0, double theta, const IlsModel& model, std::size_t trials, std::uint64_t seed) {
  if (L0 < 1) throw Error(ErrorKind::kConfig, "ils: L0 must be >= 1");
  if (model.coupling < 0.0) throw Error(ErrorKind::kConfig, "ils: coupling must be >= 0");
  model.interaction.validate();
  IlsResult out;
  out.L0 = L0;
  out.threshold = std::pow(static_cast<double>(L0), -theta);
  out.certified_infimum = model.distribution.min_value() == 0.0;
  const auto origin = LatticePoint::origin(model.dim);
  const int L = static_cast<int>(L0);
  const auto cube = model.particles == 2 ? MultiCube::two(origin, origin, L) : MultiCube::one(Cube{origin, L});
  const auto region = projection(cube);
  const std::vector<LatticePoint> centers{origin};
  const auto wide = window_around(centers, 2 * L);
  const auto outside = set_difference(wide, region);

  auto ground = [&](const DisorderConfig& config) {
    const auto op = assemble(cube, config, model.staircase, model.interaction, model.coupling);
    if (op.dim() <= kDenseThreshold) return full_spectrum(op.matrix(), false).eigenvalues.front();
    return lowest_eigenpairs(op.matrix(), 1).eigenvalues.front();
  };

  out.e0 = parallel_map<double>(trials, [&](std::size_t t) {
    const auto s = derive_seed(seed, static_cast<std::uint64_t>(L0), static_cast<std::uint64_t>(t));
    if (out.certified_infimum) return ground(DisorderConfig::sample(region, model.distribution, s));
    const auto full = DisorderConfig::sample(wide, model.distribution, s);
    double best = ground(full);
    for (std::size_t j = 0; j < model.fallback_samples; ++j) {
      best = std::min(best, ground(full.resample_region(outside, j + 1)));
    }
    return best;
  });
  std::uint64_t low = 0;
  out.min_e0 = std::numeric_limits<double>::infinity();
  for (double e : out.e0) {
    if (e <= out.threshold) ++low;
    out.min_e0 = std::min(out.min_e0, e);
  }
  out.low = wilson_interval(low, trials);
  return out;
}

}  // namespace stairloc
