#include "stairloc/harness/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "stairloc/charfn.hpp"
#include "stairloc/errors.hpp"
#include "stairloc/msa.hpp"
#include "stairloc/operator.hpp"
#include "stairloc/parallel.hpp"
#include "stairloc/spectral.hpp"
#include "stairloc/stats.hpp"

namespace stairloc::harness {
namespace {

// Sub-seed tags.
constexpr std::uint64_t kTagOuter = 1;
constexpr std::uint64_t kTagEvcomp = 2;
constexpr std::uint64_t kTagLocalize = 3;
constexpr std::uint64_t kTagIls = 4;
constexpr std::uint64_t kTagMsa = 5;
constexpr std::uint64_t kTagCharfn = 6;

MultiCube cube_of(const std::vector<LatticePoint>& centers, int radius) {
  if (centers.size() == 2) return MultiCube::two(centers[0], centers[1], radius);
  return MultiCube::one(Cube{centers.at(0), radius});
}

std::vector<LatticePoint> set_minus(const std::vector<LatticePoint>& a, const std::vector<LatticePoint>& b) {
  std::vector<LatticePoint> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Slope of log p against log x over the points with 0 < p.
Json loglog_fit(const std::vector<double>& x, const std::vector<double>& p) {
  std::vector<double> lx, lp;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (p[i] > 0 && x[i] > 0) {
      lx.push_back(std::log(x[i]));
      lp.push_back(std::log(p[i]));
    }
  }
  if (lx.size() < 2 || lx.front() == lx.back()) return Json{{"slope", nullptr}, {"intercept", nullptr}, {"points", lx.size()}};
  const auto f = least_squares(lx, lp);
  return Json{{"slope", f.slope}, {"intercept", f.intercept}, {"points", f.points}};
}

double spacing(const std::vector<double>& grid) {
  double h = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) h = std::max(h, std::abs(grid[i] - grid[i - 1]));
  return h;
}

}  // namespace

RunReport run_charfn(const ExperimentSpec& s) {
  RunReport r;
  r.kind = "charfn";
  const Staircase stair(s.staircase);
  const ShellSum sum = s.shell_source == "abstract"
                           ? ShellSum::abstract(s.shell_c, s.staircase.dim, s.staircase.decay, s.shell_first,
                                                s.shell_last, s.max_shell)
                           : ShellSum::lattice(stair, s.centers, s.shell_first, s.shell_last, s.max_shell);
  const auto& t = s.t_grid;
  const auto log_abs = log_abs_charfn(sum, s.distribution, t);
  std::vector<double> mlog(log_abs.size());
  for (std::size_t i = 0; i < mlog.size(); ++i) mlog[i] = -log_abs[i];
  const auto fit = fit_decay_exponent(t, mlog, s.window_decades);

  std::vector<double> draws;
  std::vector<std::complex<double>> emp;
  if (s.samples > 0 && sum.bounded()) {
    const auto seed = derive_seed(s.seed, kTagCharfn);
    draws = parallel_map<double>(s.samples, [&](std::size_t j) { return sample_shell_sum(sum, s.distribution, seed, j); });
    emp = empirical_charfn(draws, t);
  }

  r.table = CsvTable({"t", "log_abs_phi", "minus_log_abs_phi", "t6_abs_phi", "empirical_abs_phi"});
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = emp.empty() ? std::numeric_limits<double>::quiet_NaN() : std::abs(emp[i]);
    r.table.add({t[i], log_abs[i], mlog[i], std::pow(t[i], 6) * std::exp(log_abs[i]), e});
  }

  Json& a = r.aggregates;
  a["shells"] = {{"first", sum.first()}, {"last", sum.last()}, {"table_last", sum.table_last()},
                 {"sites", sum.total_count()}};
  a["decay_fit"] = {{"slope", fit.slope},
                    {"intercept", fit.intercept},
                    {"coefficient", std::exp(fit.intercept)},
                    {"expected_slope", s.staircase.dim / s.staircase.decay},
                    {"dropped", fit.dropped},
                    {"window_decades", s.window_decades},
                    {"window_center_log10_t", fit.window_center},
                    {"local_slope", fit.local_slope}};
  a["mean"] = mean(sum, s.distribution);
  a["variance"] = variance(sum, s.distribution);
  a["half_variance"] = 0.5 * variance(sum, s.distribution);
  a["t6_abs_phi_top"] = std::pow(t.back(), 6) * std::exp(log_abs.back());

  if (!s.v_grid.empty()) {
    const auto d = density_reconstruct(sum, s.distribution, s.v_grid, s.t_max);
    CsvTable dens({"v", "density"});
    for (std::size_t i = 0; i < d.v.size(); ++i) dens.add({d.v[i], d.density[i]});
    r.extra.emplace_back("density", std::move(dens));
    a["density"] = {{"t_max", d.t_max},
                    {"step", d.step},
                    {"quadrature_error", d.quadrature_error},
                    {"truncation_error", d.truncation_error},
                    {"location_uncertainty", d.location_uncertainty}};
  }

  if (!s.eps_grid.empty() || !s.lambda_grid.empty()) {
    const auto law = s.samples == 0
                         ? ShellDistribution::exact(sum, s.distribution, s.budget)
                         : ShellDistribution::build(sum, s.distribution, s.samples, derive_seed(s.seed, kTagCharfn, 1),
                                                    s.budget);
    a["law"] = {{"exact", law.is_exact()}, {"configurations", law.configurations()}, {"samples", law.samples()},
                {"min", law.min_value()}, {"max", law.max_value()}};
    if (!s.eps_grid.empty()) {
      CsvTable tab({"eps", "p", "lo", "hi"});
      std::vector<double> ps;
      for (double eps : s.eps_grid) {
        const auto e = max_interval_prob(law, eps);
        tab.add({eps, e.p, e.lo, e.hi});
        ps.push_back(e.p);
      }
      r.extra.emplace_back("interval", std::move(tab));
      a["interval_fit"] = loglog_fit(s.eps_grid, ps);
    }
    if (!s.lambda_grid.empty()) {
      CsvTable tab({"lambda", "p", "lo", "hi"});
      for (double lam : s.lambda_grid) {
        const auto e = edge_tail(law, sum, s.distribution, lam);
        tab.add({lam, e.p, e.lo, e.hi});
      }
      r.extra.emplace_back("edge", std::move(tab));
    }
  }
  return r;
}

RunReport run_wegner(const ExperimentSpec& s) {
  RunReport r;
  r.kind = "wegner";
  const Staircase stair(s.staircase);
  const auto cube = cube_of(s.centers, s.radius);
  const int big = enlarged_radius(s.radius, s.tau);
  const double cut = effective_cutoff(s);
  const Truncation trunc{cut, s.tail_tol};
  const auto window = window_around(s.centers, std::max(big, s.radius + static_cast<int>(std::ceil(cut))));
  const auto outer = DisorderConfig::sample(window, s.distribution, derive_seed(s.seed, kTagOuter));
  const auto enlarged = window_around(s.centers, big);
  const auto region = s.particles == 1 ? set_minus(enlarged, window_around(s.centers, s.radius)) : enlarged;
  const double bound = outside_influence_bound(cube, s.tau, s.coupling, stair);
  const auto& E = s.energy_grid;

  auto distances = [&](const DisorderConfig& cfg) {
    const auto op = assemble(cube, cfg, stair, s.interaction, s.coupling, trunc);
    const auto spec = full_spectrum(op, false);
    std::vector<double> d(E.size());
    for (std::size_t i = 0; i < E.size(); ++i) d[i] = dist_to_spectrum(spec.eigenvalues, E[i]);
    return d;
  };

  const auto rows = parallel_map<std::vector<double>>(
      s.trials, [&](std::size_t t) { return distances(outer.resample_region(region, t + 1)); });

  r.table = CsvTable({"trial", "energy", "distance"});
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t i = 0; i < E.size(); ++i)
      r.table.add({static_cast<std::uint64_t>(t), E[i], rows[t][i]});

  // Exact law of the distances over the resampled region.
  std::vector<std::vector<double>> exact_p;
  if (s.exact) {
    const auto atoms = s.distribution.support();
    ConfigEnumerator check(region.size(), atoms, s.budget);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < region.size(); ++i) total *= atoms.size();
    struct Weighted {
      double weight = 0;
      std::vector<double> d;
    };
    const auto configs = parallel_map<Weighted>(total, [&](std::size_t idx) {
      std::vector<double> values(region.size());
      double w = 1;
      std::size_t rest = idx;
      for (std::size_t j = 0; j < region.size(); ++j) {
        const auto& atom = atoms[rest % atoms.size()];
        rest /= atoms.size();
        values[j] = atom.value;
        w *= atom.probability;
      }
      return Weighted{w, distances(outer.with_values(region, values))};
    });
    exact_p.assign(E.size(), std::vector<double>(s.eps_grid.size(), 0.0));
    for (const auto& c : configs)
      for (std::size_t i = 0; i < E.size(); ++i)
        for (std::size_t j = 0; j < s.eps_grid.size(); ++j)
          if (c.d[i] <= s.eps_grid[j]) exact_p[i][j] += c.weight;
    r.aggregates["exact_configurations"] = total;
  }

  Json per_energy = Json::array();
  std::vector<double> sup_p(s.eps_grid.size(), 0.0);
  bool all_agree = true;
  for (std::size_t i = 0; i < E.size(); ++i) {
    Json rows_json = Json::array();
    std::vector<double> ps, stable_ps, exact_ps;
    for (std::size_t j = 0; j < s.eps_grid.size(); ++j) {
      const double eps = s.eps_grid[j];
      std::uint64_t hit = 0, stable_hit = 0;
      for (const auto& row : rows) {
        hit += row[i] <= eps;
        stable_hit += row[i] <= eps + bound;
      }
      const auto est = wilson_interval(hit, rows.size());
      const auto stable = wilson_interval(stable_hit, rows.size());
      Json item{{"eps", eps}, {"estimate", to_json(est)}, {"stable", to_json(stable)}};
      if (s.exact) {
        const double p = exact_p[i][j];
        const bool agree = p >= est.lo && p <= est.hi;
        all_agree = all_agree && agree;
        item["exact"] = p;
        item["agrees"] = agree;
        exact_ps.push_back(p);
      }
      rows_json.push_back(item);
      ps.push_back(est.p);
      stable_ps.push_back(stable.p);
      sup_p[j] = std::max(sup_p[j], est.p);
    }
    Json e{{"energy", E[i]}, {"rows", rows_json}, {"fit", loglog_fit(s.eps_grid, ps)},
           {"stable_fit", loglog_fit(s.eps_grid, stable_ps)}};
    if (s.exact) e["exact_fit"] = loglog_fit(s.eps_grid, exact_ps);
    per_energy.push_back(e);
  }
  Json& a = r.aggregates;
  a["eps_floor"] = std::pow(static_cast<double>(s.radius), -s.staircase.decay * s.tau);
  a["enlarged_radius"] = big;
  a["resampled_sites"] = region.size();
  a["outside_influence_bound"] = bound;
  a["energies"] = per_energy;
  a["sup_over_energy"] = {{"p", sup_p}, {"fit", loglog_fit(s.eps_grid, sup_p)},
                          {"estimator", "max over the energy grid"}, {"grid_spacing", spacing(E)}};
  if (s.exact) a["mc_agrees_with_exact"] = all_agree;
  return r;
}

RunReport run_evcomp(const ExperimentSpec& s) {
  RunReport r;
  r.kind = "evcomp";
  const Staircase stair(s.staircase);
  const auto cube1 = cube_of(s.centers, s.radius);
  const auto cube2 = cube_of(s.centers2, s.radius);
  const double cut = effective_cutoff(s);
  const Truncation trunc{cut, s.tail_tol};
  std::vector<LatticePoint> all = s.centers;
  all.insert(all.end(), s.centers2.begin(), s.centers2.end());
  const auto window = window_around(all, s.radius + static_cast<int>(std::ceil(cut)));

  const auto gaps = parallel_map<double>(s.trials, [&](std::size_t t) {
    const auto cfg = DisorderConfig::sample(window, s.distribution, derive_seed(s.seed, kTagEvcomp, t));
    const auto a = full_spectrum(assemble(cube1, cfg, stair, s.interaction, s.coupling, trunc), false);
    const auto b = full_spectrum(assemble(cube2, cfg, stair, s.interaction, s.coupling, trunc), false);
    return min_spectral_gap(a.eigenvalues, b.eigenvalues);
  });

  r.table = CsvTable({"trial", "gap"});
  for (std::size_t t = 0; t < gaps.size(); ++t) r.table.add({static_cast<std::uint64_t>(t), gaps[t]});

  Json rows = Json::array();
  std::vector<double> ps;
  for (double eps : s.eps_grid) {
    std::uint64_t hit = 0;
    for (double g : gaps) hit += g <= eps;
    const auto est = wilson_interval(hit, gaps.size());
    rows.push_back(Json{{"eps", eps}, {"estimate", to_json(est)}});
    ps.push_back(est.p);
  }
  int sep = 0;
  for (std::size_t j = 0; j < s.centers.size(); ++j) sep = std::max(sep, sup_distance(s.centers[j], s.centers2[j]));
  r.aggregates["center_distance"] = sep;
  r.aggregates["rows"] = rows;
  r.aggregates["fit"] = loglog_fit(s.eps_grid, ps);
  r.aggregates["min_gap"] = gaps.empty() ? 0.0 : *std::min_element(gaps.begin(), gaps.end());
  return r;
}

RunReport run_ils(const ExperimentSpec& s) {
  RunReport r;
  r.kind = "ils";
  IlsModel model;
  model.staircase = Staircase(s.staircase);
  model.interaction = s.interaction;
  model.distribution = s.distribution;
  model.coupling = s.coupling;
  model.particles = s.particles;
  model.dim = s.staircase.dim;

  r.table = CsvTable({"L0", "trial", "e0", "below_threshold"});
  Json per = Json::array();
  std::vector<IlsResult> results;
  bool nonnegative = true;
  for (auto L0 : s.ils_L0) {
    auto res = ils_probe(L0, s.theta, model, s.trials, derive_seed(s.seed, kTagIls));
    for (std::size_t t = 0; t < res.e0.size(); ++t) {
      r.table.add({L0, static_cast<std::uint64_t>(t), res.e0[t], res.e0[t] <= res.threshold});
      nonnegative = nonnegative && res.e0[t] >= 0.0;
    }
    per.push_back(Json{{"L0", L0},
                       {"threshold", res.threshold},
                       {"estimate", to_json(res.low)},
                       {"certified_infimum", res.certified_infimum},
                       {"min_e0", res.min_e0}});
    results.push_back(std::move(res));
  }
  bool decreasing = true, separated_all = true;
  for (std::size_t i = 1; i < results.size(); ++i) {
    decreasing = decreasing && results[i].low.p < results[i - 1].low.p;
    separated_all = separated_all && separated(results[i].low, results[i - 1].low) &&
                    results[i].low.hi < results[i - 1].low.lo;
  }
  r.aggregates["theta"] = s.theta;
  r.aggregates["scales"] = per;
  r.aggregates["e0_nonnegative"] = nonnegative;
  r.aggregates["strictly_decreasing"] = decreasing;
  r.aggregates["ci_separated"] = separated_all;
  r.aggregates["certificate"] =
      s.distribution.min_value() == 0.0 ? "all-zero outside amplitudes (exact infimum)" : "minimum over sampled outside draws";
  return r;
}

RunReport run_msa(const ExperimentSpec& s) {
  RunReport r;
  r.kind = "msa";
  const ScaleSchedule schedule(s.schedule);
  schedule.require_valid(s.override_constraints);
  MsaModel model;
  model.staircase = Staircase(s.staircase);
  model.interaction = s.interaction;
  model.distribution = s.distribution;
  model.coupling = s.coupling;
  model.u1 = s.centers.at(0);
  model.u2 = s.centers.size() > 1 ? s.centers[1] : s.centers[0];
  if (s.separation != 0) model.u2[0] = model.u1[0] + s.separation;
  model.stride = s.stride;
  model.stability_trials = s.stability_trials;
  model.outside_shell = s.outside_shell;

  const auto rep = run_fixed_energy_msa(s.msa_energy, schedule, s.trials, model, derive_seed(s.seed, kTagMsa));

  r.table = CsvTable({"k", "trial", "valid", "ns", "sns", "sns_tier", "snr_tier", "max_green", "distance",
                      "cause_not_snr", "cause_ni_singular", "cause_not_s_good", "largest_singular_set",
                      "audit_violation"});
  for (const auto& t : rep.trials) {
    r.table.add({static_cast<std::int64_t>(t.k), t.trial, t.valid, t.ns, t.sns, std::string(to_string(t.sns_tier)),
                 std::string(to_string(t.snr_tier)), t.max_green, t.distance, t.cause_not_snr, t.cause_ni_singular,
                 t.cause_not_s_good, static_cast<std::uint64_t>(t.largest_singular_set), t.audit_violation});
  }
  Json table = Json::array();
  for (const auto& row : schedule.rows())
    table.push_back(Json{{"k", row.k}, {"L", row.L}, {"m_k", row.m_k}, {"eps_k", row.eps_k}, {"delta_k", row.delta_k}});
  Json scales = Json::array();
  std::size_t violations = 0;
  for (const auto& sc : rep.scales) {
    violations += sc.audit_violations;
    scales.push_back(Json{{"k", sc.row.k},
                          {"L", sc.row.L},
                          {"valid", sc.valid},
                          {"invalid", sc.invalid},
                          {"not_sns", to_json(sc.not_sns)},
                          {"target", std::pow(static_cast<double>(sc.row.L), -s.schedule.b)},
                          {"not_snr", sc.not_snr},
                          {"ni_singular", sc.ni_singular},
                          {"not_s_good", sc.not_s_good},
                          {"certified_sns", sc.certified_sns},
                          {"sampled_sns", sc.sampled_sns},
                          {"audit_hypotheses", sc.audit_hypotheses},
                          {"audit_violations", sc.audit_violations}});
  }
  Json checks = Json::array();
  for (const auto& c : schedule.checks()) checks.push_back(Json{{"check", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  Json& a = r.aggregates;
  a["energy"] = s.msa_energy;
  a["schedule"] = table;
  a["constraints"] = checks;
  a["constraints_satisfied"] = schedule.satisfied();
  a["constraints_overridden"] = s.override_constraints && !schedule.satisfied();
  a["s_exponent"] = schedule.s_exponent();
  a["sigma"] = schedule.sigma();
  a["beta_kappa"] = schedule.beta_kappa();
  a["scales"] = scales;
  a["audit_violations"] = violations;
  a["tiers"] = {"certified", "sampled", "failed"};
  a["note"] = "multi-scale trend is exploratory at desk scale";
  return r;
}

namespace {

int point_distance(const MultiPoint& a, const MultiPoint& b) {
  int d = 0;
  for (int j = 0; j < a.count; ++j) d = std::max(d, sup_distance(a.particle[static_cast<std::size_t>(j)], b.particle[static_cast<std::size_t>(j)]));
  return d;
}

struct StateRow {
  std::size_t index = 0;
  double eigenvalue = 0;
  int peak_offset = 0;  // first coordinate of the peak relative to the centre
  double mass_within = 0;
  double decay_slope = 0;
};

struct LocalizeTrial {
  std::vector<StateRow> states;
  std::vector<double> correlator;  // by |x - y|
  std::vector<double> green;       // max core-boundary |G| per energy
  std::vector<double> green_fine;  // on the refined grid
};

}  // namespace

RunReport run_localize(const ExperimentSpec& s) {
  RunReport r;
  r.kind = "localize";
  const Staircase stair(s.staircase);
  const auto cube = cube_of(s.centers, s.radius);
  const double cut = effective_cutoff(s);
  const Truncation trunc{cut, s.tail_tol};
  const auto window = window_around(s.centers, s.radius + static_cast<int>(std::ceil(cut)));
  std::vector<double> fine;
  for (std::size_t i = 0; i < s.energy_grid.size(); ++i) {
    fine.push_back(s.energy_grid[i]);
    if (i + 1 < s.energy_grid.size()) fine.push_back(0.5 * (s.energy_grid[i] + s.energy_grid[i + 1]));
  }

  const auto trials = parallel_map<LocalizeTrial>(s.trials, [&](std::size_t t) {
    const auto cfg = DisorderConfig::sample(window, s.distribution, derive_seed(s.seed, kTagLocalize, t));
    const auto op = assemble(cube, cfg, stair, s.interaction, s.coupling, trunc);
    const auto spec = full_spectrum(op, true);
    const auto& sites = op.sites();
    const std::size_t n = std::min(s.states, spec.eigenvalues.size());
    LocalizeTrial out;
    const int R = s.radius;
    for (std::size_t k = 0; k < n; ++k) {
      const Eigen::VectorXd psi = spec.eigenvectors.col(static_cast<Eigen::Index>(k));
      Eigen::Index peak = 0;
      psi.cwiseAbs().maxCoeff(&peak);
      const auto& xp = sites[static_cast<std::size_t>(peak)];
      double within = 0;
      std::vector<double> envelope(static_cast<std::size_t>(2 * R + 1), 0.0);
      for (std::size_t i = 0; i < sites.size(); ++i) {
        const int d = point_distance(sites[i], xp);
        const double v = psi(static_cast<Eigen::Index>(i));
        if (d <= s.mass_radius) within += v * v;
        envelope[static_cast<std::size_t>(d)] = std::max(envelope[static_cast<std::size_t>(d)], std::abs(v));
      }
      std::vector<double> lx, ly;
      const double top = envelope[0];
      for (std::size_t d = 1; d < envelope.size(); ++d) {
        if (envelope[d] > 1e-12 * top) {
          lx.push_back(0.5 * std::log1p(static_cast<double>(d * d)));
          ly.push_back(std::log(envelope[d]));
        }
      }
      StateRow row;
      row.index = k;
      row.eigenvalue = spec.eigenvalues[k];
      row.peak_offset = xp.particle[0][0] - s.centers[0][0];
      row.mass_within = within;
      row.decay_slope = lx.size() >= 2 ? least_squares(lx, ly).slope : std::numeric_limits<double>::quiet_NaN();
      out.states.push_back(row);
    }
    const EnergyInterval interval{spec.eigenvalues.front(), spec.eigenvalues[n - 1]};
    // Pairs (x, x + r e_1) of the first particle, other coordinates fixed.
    for (int rr = 0; rr <= s.correlator_max; ++rr) {
      double acc = 0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < sites.size(); ++i) {
        MultiPoint y = sites[i];
        y.particle[0][0] += rr;
        if (!cube.contains(y)) continue;
        acc += ef_correlator(spec, interval, static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(op.index_of(y)));
        ++count;
      }
      out.correlator.push_back(count ? acc / static_cast<double>(count) : 0.0);
    }
    auto green_at = [&](double e) {
      if (dist_to_spectrum(spec.eigenvalues, e) <= 1e-12 * std::max(1.0, op.norm1()))
        return std::numeric_limits<double>::infinity();
      return is_nonsingular(op, e, 1.0).max_green;
    };
    if (s.radius >= 3) {
      for (double e : s.energy_grid) out.green.push_back(green_at(e));
      for (double e : fine) out.green_fine.push_back(green_at(e));
    }
    return out;
  });

  r.table = CsvTable({"trial", "state", "eigenvalue", "peak_offset", "mass_within", "decay_slope"});
  double min_mass = 1.0;
  std::vector<double> slopes;
  std::vector<double> corr(static_cast<std::size_t>(s.correlator_max + 1), 0.0);
  for (std::size_t t = 0; t < trials.size(); ++t) {
    for (const auto& st : trials[t].states) {
      r.table.add({static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(st.index), st.eigenvalue,
                   static_cast<std::int64_t>(st.peak_offset), st.mass_within, st.decay_slope});
      min_mass = std::min(min_mass, st.mass_within);
      if (std::isfinite(st.decay_slope)) slopes.push_back(st.decay_slope);
    }
    for (std::size_t d = 0; d < corr.size(); ++d) corr[d] += trials[t].correlator[d] / static_cast<double>(trials.size());
  }
  CsvTable ctab({"distance", "correlator"});
  std::vector<double> lx, ly;
  bool monotone = true;
  for (std::size_t d = 0; d < corr.size(); ++d) {
    ctab.add({static_cast<std::uint64_t>(d), corr[d]});
    if (d >= 1 && corr[d] > 0) {
      lx.push_back(0.5 * std::log1p(static_cast<double>(d * d)));
      ly.push_back(std::log(corr[d]));
    }
    if (d >= 1) monotone = monotone && corr[d] <= corr[d - 1];
  }
  r.extra.emplace_back("correlator", std::move(ctab));

  Json& a = r.aggregates;
  a["states_per_trial"] = s.states;
  a["mass_radius"] = s.mass_radius;
  a["min_mass_within"] = min_mass;
  double mean_slope = 0;
  for (double v : slopes) mean_slope += v / static_cast<double>(slopes.size());
  a["mean_decay_slope"] = slopes.empty() ? Json(nullptr) : Json(mean_slope);
  a["correlator"] = corr;
  a["correlator_nonincreasing"] = monotone;
  a["correlator_fit"] = lx.size() >= 2 ? Json{{"slope", least_squares(lx, ly).slope}, {"points", lx.size()}}
                                       : Json{{"slope", nullptr}, {"points", lx.size()}};
  if (!s.energy_grid.empty() && s.radius >= 3) {
    double sup = 0, sup_fine = 0;
    for (const auto& t : trials) {
      for (double g : t.green) sup = std::max(sup, g);
      for (double g : t.green_fine) sup_fine = std::max(sup_fine, g);
    }
    CsvTable gtab({"trial", "energy", "max_green"});
    for (std::size_t t = 0; t < trials.size(); ++t)
      for (std::size_t i = 0; i < s.energy_grid.size(); ++i) gtab.add({static_cast<std::uint64_t>(t), s.energy_grid[i], trials[t].green[i]});
    r.extra.emplace_back("green", std::move(gtab));
    a["sup_green"] = {{"estimator", "max over the energy grid"},
                      {"grid_spacing", spacing(s.energy_grid)},
                      {"value", sup},
                      {"refined_spacing", spacing(fine)},
                      {"refined_value", sup_fine}};
  }
  return r;
}

RunReport run_validate(const ExperimentSpec& s) {
  RunReport r;
  r.kind = "validate";
  r.validation = validate(s);
  r.table = CsvTable({"check", "ok", "detail"});
  for (const auto& v : r.validation) r.table.add({v.name, v.ok, v.detail});
  const ScaleSchedule schedule(s.schedule);
  Json table = Json::array();
  for (const auto& row : schedule.rows())
    table.push_back(Json{{"k", row.k}, {"L", row.L}, {"m_k", row.m_k}, {"eps_k", row.eps_k}, {"delta_k", row.delta_k}});
  r.aggregates["schedule"] = table;
  r.aggregates["constraints_satisfied"] = schedule.satisfied();
  r.aggregates["s_exponent"] = schedule.s_exponent();
  r.aggregates["sigma"] = schedule.sigma();
  r.aggregates["beta_kappa"] = schedule.beta_kappa();
  return r;
}

RunReport run_experiment(const ExperimentSpec& spec) {
  const auto validation = validate(spec);
  set_thread_count(spec.threads);
  const auto start = std::chrono::steady_clock::now();
  RunReport r;
  const auto& k = spec.kind;
  if (k == "charfn") r = run_charfn(spec);
  else if (k == "wegner") r = run_wegner(spec);
  else if (k == "evcomp") r = run_evcomp(spec);
  else if (k == "ils") r = run_ils(spec);
  else if (k == "msa") r = run_msa(spec);
  else if (k == "localize") r = run_localize(spec);
  else throw Error(ErrorKind::kConfig, "unknown experiment kind '" + k + "'");
  r.validation = validation;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace stairloc::harness
