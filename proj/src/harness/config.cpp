#include "stairloc/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "stairloc/errors.hpp"

namespace stairloc::harness {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"experiment", {"kind", "seed", "trials", "threads", "out"}},
      {"model", {"dim", "particles", "kappa", "decay", "coupling", "interaction_strength", "interaction_range"}},
      {"disorder", {"distribution", "p", "atoms"}},
      {"geometry", {"radius", "tau", "centers", "centers2", "cutoff", "tail_tol", "separation_factor"}},
      {"grids", {"t", "eps", "energy", "lambda", "v"}},
      {"charfn", {"source", "c", "first", "last", "max_shell", "window_decades", "t_max", "samples", "budget"}},
      {"wegner", {"exact", "budget"}},
      {"schedule", {"L0", "alpha", "tau", "m", "b", "gamma", "K", "S", "k_max"}},
      {"msa", {"energy", "stride", "stability_trials", "outside_shell", "separation"}},
      {"ils", {"L0", "theta"}},
      {"localize", {"states", "mass_radius", "correlator_max"}},
  };
  return s;
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::kConfig, what); }

template <class T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
  auto node = tree.get_optional<std::string>(key);
  if (!node) return fallback;
  std::string text = boost::trim_copy(*node);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      boost::to_lower(text);
      if (text == "true" || text == "1" || text == "yes") return true;
      if (text == "false" || text == "0" || text == "no") return false;
      bad(key + ": expected a boolean, got '" + text + "'");
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!text.empty() && text[0] == '-') bad(key + ": expected a non-negative integer");
      return boost::lexical_cast<T>(text);
    } else {
      return boost::lexical_cast<T>(text);
    }
  } catch (const boost::bad_lexical_cast&) {
    bad(key + ": cannot parse '" + text + "'");
  }
}

std::string get_text(const pt::ptree& tree, const std::string& key) {
  return boost::trim_copy(tree.get<std::string>(key, ""));
}

double to_double(const std::string& s, const std::string& what) {
  try {
    return boost::lexical_cast<double>(boost::trim_copy(s));
  } catch (const boost::bad_lexical_cast&) {
    bad(what + ": cannot parse '" + s + "'");
  }
}

AmplitudeDistribution parse_distribution(const pt::ptree& tree, std::string& text) {
  std::string name = boost::to_lower_copy(get_text(tree, "disorder.distribution"));
  if (name.empty()) name = "bernoulli";
  if (name == "bernoulli") {
    const double p = get<double>(tree, "disorder.p", 0.5);
    text = "bernoulli(" + boost::lexical_cast<std::string>(p) + ")";
    return AmplitudeDistribution::bernoulli(p);
  }
  if (name == "uniform") {
    text = "uniform";
    return AmplitudeDistribution::uniform();
  }
  if (name == "atoms") {
    std::vector<Atom> atoms;
    const std::string list = get_text(tree, "disorder.atoms");
    std::vector<std::string> items;
    boost::split(items, list, boost::is_any_of(","));
    for (const auto& item : items) {
      if (boost::trim_copy(item).empty()) continue;
      std::vector<std::string> kv;
      boost::split(kv, item, boost::is_any_of(":"));
      if (kv.size() != 2) bad("disorder.atoms: expected value:probability, got '" + item + "'");
      atoms.push_back({to_double(kv[0], "disorder.atoms"), to_double(kv[1], "disorder.atoms")});
    }
    if (atoms.empty()) bad("disorder.atoms: empty");
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
    text = "atoms(" + list + ")";
    return AmplitudeDistribution::atoms(std::move(atoms));
  }
  bad("disorder.distribution: unknown law '" + name + "'");
}

void check_keys(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    auto it = schema().find(section);
    if (it == schema().end()) bad("unknown section [" + section + "]");
    if (!body.data().empty() && body.empty()) bad("key '" + section + "' outside any section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) bad("unknown key " + section + "." + key);
    }
  }
}

}  // namespace

std::vector<double> parse_grid(const std::string& raw) {
  const std::string text = boost::trim_copy(raw);
  if (text.empty()) return {};
  for (const char* fn : {"linspace", "logspace"}) {
    const std::string prefix = std::string(fn) + "(";
    if (!boost::starts_with(text, prefix)) continue;
    if (text.back() != ')') bad("grid '" + text + "': missing ')'");
    std::vector<std::string> args;
    const std::string inner = text.substr(prefix.size(), text.size() - prefix.size() - 1);
    boost::split(args, inner, boost::is_any_of(","));
    if (args.size() != 3) bad("grid '" + text + "': expected (a, b, n)");
    const double a = to_double(args[0], "grid");
    const double b = to_double(args[1], "grid");
    const double nd = to_double(args[2], "grid");
    if (nd < 1 || nd != std::floor(nd)) bad("grid '" + text + "': n must be a positive integer");
    const auto n = static_cast<std::size_t>(nd);
    const bool log = std::string(fn) == "logspace";
    if (log && !(a > 0 && b > 0)) bad("grid '" + text + "': logspace endpoints must be positive");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      out[i] = log ? std::exp(std::log(a) + f * (std::log(b) - std::log(a))) : a + f * (b - a);
    }
    out.front() = a;
    if (n > 1) out.back() = b;
    return out;
  }
  std::vector<std::string> items;
  boost::split(items, text, boost::is_any_of(","));
  std::vector<double> out;
  for (const auto& item : items) out.push_back(to_double(item, "grid"));
  return out;
}

std::vector<LatticePoint> parse_points(const std::string& raw, int dim) {
  std::vector<LatticePoint> out;
  const std::string text = boost::trim_copy(raw);
  if (text.empty()) return out;
  std::vector<std::string> points;
  boost::split(points, text, boost::is_any_of(";"));
  for (const auto& p : points) {
    std::vector<std::string> coords;
    boost::split(coords, boost::trim_copy(p), boost::is_any_of(","));
    if (static_cast<int>(coords.size()) != dim) bad("point '" + p + "' does not have " + std::to_string(dim) + " coordinates");
    LatticePoint x = LatticePoint::origin(dim);
    for (int i = 0; i < dim; ++i) {
      const double v = to_double(coords[static_cast<std::size_t>(i)], "point");
      if (v != std::floor(v) || std::abs(v) > 1e6) bad("point '" + p + "': coordinates must be integers");
      x[i] = static_cast<int>(v);
    }
    out.push_back(x);
  }
  return out;
}

ExperimentSpec parse_spec(const std::string& text, const std::string& kind, const Overrides& overrides) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    bad(std::string("config: ") + e.what());
  }
  check_keys(tree);

  ExperimentSpec s;
  s.kind = kind;
  const std::string declared = get_text(tree, "experiment.kind");
  if (!declared.empty() && !kind.empty() && declared != kind)
    bad("config declares kind '" + declared + "' but was run as '" + kind + "'");
  if (s.kind.empty()) s.kind = declared;

  s.seed = get<std::uint64_t>(tree, "experiment.seed", s.seed);
  s.trials = get<std::size_t>(tree, "experiment.trials", s.trials);
  s.threads = get<int>(tree, "experiment.threads", s.threads);
  s.out = tree.get<std::string>("experiment.out", s.out);

  s.staircase.dim = get<int>(tree, "model.dim", 1);
  s.staircase.kappa = get<double>(tree, "model.kappa", 2.0);
  s.staircase.decay = get<double>(tree, "model.decay", 3.0);
  s.particles = get<int>(tree, "model.particles", s.particles);
  s.coupling = get<double>(tree, "model.coupling", s.coupling);
  s.interaction.strength = get<double>(tree, "model.interaction_strength", 0.0);
  s.interaction.range = get<double>(tree, "model.interaction_range", 0.0);

  s.distribution = parse_distribution(tree, s.distribution_text);

  if (s.staircase.dim < 1 || s.staircase.dim > kMaxDim) bad("model.dim must be in 1..3");
  if (s.particles != 1 && s.particles != 2) bad("model.particles must be 1 or 2");
  s.radius = get<int>(tree, "geometry.radius", s.radius);
  s.tau = get<double>(tree, "geometry.tau", s.tau);
  s.centers = parse_points(get_text(tree, "geometry.centers"), s.staircase.dim);
  s.centers2 = parse_points(get_text(tree, "geometry.centers2"), s.staircase.dim);
  if (s.centers.empty()) s.centers.assign(static_cast<std::size_t>(s.particles), LatticePoint::origin(s.staircase.dim));
  s.cutoff = get<double>(tree, "geometry.cutoff", s.cutoff);
  s.tail_tol = get<double>(tree, "geometry.tail_tol", s.tail_tol);
  s.separation_factor = get<double>(tree, "geometry.separation_factor", s.separation_factor);

  s.t_grid = parse_grid(get_text(tree, "grids.t"));
  s.eps_grid = parse_grid(get_text(tree, "grids.eps"));
  s.energy_grid = parse_grid(get_text(tree, "grids.energy"));
  s.lambda_grid = parse_grid(get_text(tree, "grids.lambda"));
  s.v_grid = parse_grid(get_text(tree, "grids.v"));

  s.shell_source = get<std::string>(tree, "charfn.source", s.shell_source);
  s.shell_c = get<double>(tree, "charfn.c", s.shell_c);
  s.shell_first = get<std::int64_t>(tree, "charfn.first", s.shell_first);
  const std::int64_t last = get<std::int64_t>(tree, "charfn.last", 0);
  s.shell_last = last <= 0 ? -1 : last;
  s.max_shell = get<std::int64_t>(tree, "charfn.max_shell", s.max_shell);
  s.window_decades = get<double>(tree, "charfn.window_decades", s.window_decades);
  s.t_max = get<double>(tree, "charfn.t_max", s.t_max);
  s.samples = get<std::size_t>(tree, "charfn.samples", s.samples);
  s.budget = get<std::uint64_t>(tree, "charfn.budget", s.budget);

  s.exact = get<bool>(tree, "wegner.exact", s.exact);
  if (tree.get_optional<std::string>("wegner.budget")) s.budget = get<std::uint64_t>(tree, "wegner.budget", s.budget);

  auto& sc = s.schedule;
  sc.L0 = get<std::int64_t>(tree, "schedule.L0", sc.L0);
  sc.alpha = get<double>(tree, "schedule.alpha", sc.alpha);
  sc.tau = get<double>(tree, "schedule.tau", sc.tau);
  sc.m = get<double>(tree, "schedule.m", sc.m);
  sc.b = get<double>(tree, "schedule.b", sc.b);
  sc.gamma = get<double>(tree, "schedule.gamma", sc.gamma);
  sc.K = get<int>(tree, "schedule.K", sc.K);
  sc.S = get<double>(tree, "schedule.S", sc.S);
  sc.k_max = get<int>(tree, "schedule.k_max", sc.k_max);
  sc.particles = s.particles;
  sc.staircase = s.staircase;

  s.msa_energy = get<double>(tree, "msa.energy", s.msa_energy);
  s.stride = get<int>(tree, "msa.stride", s.stride);
  s.stability_trials = get<std::size_t>(tree, "msa.stability_trials", s.stability_trials);
  s.outside_shell = get<int>(tree, "msa.outside_shell", s.outside_shell);
  s.separation = get<int>(tree, "msa.separation", s.separation);

  const std::string ils_l0 = get_text(tree, "ils.L0");
  if (!ils_l0.empty()) {
    s.ils_L0.clear();
    for (double v : parse_grid(ils_l0)) {
      if (v != std::floor(v) || v < 1) bad("ils.L0: expected positive integers");
      s.ils_L0.push_back(static_cast<std::int64_t>(v));
    }
  }
  s.theta = get<double>(tree, "ils.theta", s.theta);

  s.states = get<std::size_t>(tree, "localize.states", s.states);
  s.mass_radius = get<int>(tree, "localize.mass_radius", s.mass_radius);
  s.correlator_max = get<int>(tree, "localize.correlator_max", s.correlator_max);

  if (overrides.seed) s.seed = *overrides.seed;
  if (overrides.trials) s.trials = *overrides.trials;
  if (overrides.threads) s.threads = *overrides.threads;
  if (overrides.out) s.out = *overrides.out;
  s.override_constraints = overrides.override_constraints;
  if (s.threads < 1) bad("threads must be >= 1");
  return s;
}

ExperimentSpec load_spec(const std::string& path, const std::string& kind, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) bad("cannot read config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_spec(text.str(), kind, overrides);
}

double effective_cutoff(const ExperimentSpec& spec) {
  if (spec.cutoff > 0) return spec.cutoff;
  return certified_cutoff(Staircase(spec.staircase), spec.tail_tol);
}

namespace {

constexpr std::size_t kMaxWindowSites = std::size_t{1} << 24;
constexpr std::size_t kMaxCubeSites = kDenseThreshold;

void need(bool ok, const std::string& what) {
  if (!ok) bad(what);
}

void need_positive_grid(const std::vector<double>& grid, const std::string& name) {
  need(!grid.empty(), "grids." + name + " is required");
  for (double v : grid) need(std::isfinite(v) && v > 0, "grids." + name + " must be positive");
}

std::size_t window_sites(int dim, std::size_t centers, double radius) {
  const double side = 2.0 * radius + 1.0;
  return static_cast<std::size_t>(std::min(1e18, static_cast<double>(centers) * std::pow(side, dim)));
}

std::size_t cube_sites(int dim, int particles, int radius) {
  return static_cast<std::size_t>(std::pow(2.0 * radius + 1.0, dim * particles));
}

void check_window(const ExperimentSpec& s, double radius, std::size_t centers) {
  const auto n = window_sites(s.staircase.dim, centers, radius);
  if (n > kMaxWindowSites)
    throw Error(ErrorKind::kTooLarge, "window of " + std::to_string(n) + " sites exceeds the budget of " +
                                          std::to_string(kMaxWindowSites) + "; raise tail_tol or lower the cutoff");
}

}  // namespace

std::vector<ValidationItem> validate(const ExperimentSpec& s) {
  std::vector<ValidationItem> items;
  s.staircase.validate();
  items.push_back({"decay_exceeds_dim", true, "A=" + std::to_string(s.staircase.decay)});
  s.distribution.validate();
  s.interaction.validate();
  need(s.coupling >= 0, "model.coupling must be >= 0");
  need(s.trials >= 1 || s.kind == "charfn" || s.kind.empty(), "experiment.trials must be >= 1");

  const std::string& k = s.kind;
  const bool uses_window = k == "wegner" || k == "evcomp" || k == "localize";
  if (uses_window) {
    need(s.tail_tol > 0, "geometry.tail_tol must be positive");
    const Staircase stair(s.staircase);
    const double cut = effective_cutoff(s);
    const double tail = tail_bound(stair, cut);
    need(tail <= s.tail_tol, "tail_bound(cutoff) = " + std::to_string(tail) + " exceeds tail_tol");
    items.push_back({"truncation", true, "cutoff=" + std::to_string(cut) + " tail_bound=" + std::to_string(tail)});
    need(s.radius >= 0, "geometry.radius must be >= 0");
    need(static_cast<int>(s.centers.size()) == s.particles, "geometry.centers needs one point per particle");
    need(cube_sites(s.staircase.dim, s.particles, s.radius) <= kMaxCubeSites,
         "cube dimension exceeds the dense threshold");
  }

  if (k == "charfn") {
    need(s.shell_source == "lattice" || s.shell_source == "abstract", "charfn.source must be lattice or abstract");
    need(s.shell_first >= 1, "charfn.first must be >= 1");
    need(s.shell_last == -1 || s.shell_last >= s.shell_first, "charfn.last must be >= first");
    need(s.max_shell >= s.shell_first, "charfn.max_shell must be >= first");
    need(s.distribution.is_atomic(), "charfn needs an atomic amplitude law");
    need_positive_grid(s.t_grid, "t");
    need(s.window_decades > 0, "charfn.window_decades must be positive");
    if (!s.v_grid.empty()) need(s.t_max > 0, "charfn.t_max is required with grids.v");
    if (!s.eps_grid.empty()) need(s.shell_last != -1, "interval probabilities need a bounded sum (charfn.last)");
    if (!s.lambda_grid.empty()) need(s.shell_last != -1, "edge tails need a bounded sum (charfn.last)");
  } else if (k == "wegner") {
    need_positive_grid(s.eps_grid, "eps");
    need(!s.energy_grid.empty(), "grids.energy is required");
    need(s.radius >= 1, "geometry.radius must be >= 1");
    const double floor_eps = std::pow(static_cast<double>(s.radius), -s.staircase.decay * s.tau);
    for (double e : s.eps_grid)
      need(e >= floor_eps, "eps grid below the floor L^{-A tau} = " + std::to_string(floor_eps));
    items.push_back({"eps_floor", true, "eps_L=" + std::to_string(floor_eps)});
    const int big = enlarged_radius(s.radius, s.tau);
    need(big > s.radius, "geometry.tau too small: enlarged cube equals the cube");
    check_window(s, std::max<double>(big, s.radius + std::ceil(effective_cutoff(s))), s.centers.size());
    if (s.exact) need(s.distribution.is_atomic(), "wegner.exact needs an atomic law");
  } else if (k == "evcomp") {
    need_positive_grid(s.eps_grid, "eps");
    need(s.centers2.size() == s.centers.size(), "geometry.centers2 needs one point per particle");
    int sep = 0;
    for (std::size_t j = 0; j < s.centers.size(); ++j) sep = std::max(sep, sup_distance(s.centers[j], s.centers2[j]));
    need(sep > s.separation_factor * s.radius,
         "cube centres " + std::to_string(sep) + " apart; need more than separation_factor * L");
    items.push_back({"separation", true, std::to_string(sep) + " > " + std::to_string(s.separation_factor * s.radius)});
    std::vector<LatticePoint> all = s.centers;
    all.insert(all.end(), s.centers2.begin(), s.centers2.end());
    check_window(s, s.radius + std::ceil(effective_cutoff(s)), all.size());
  } else if (k == "localize") {
    need(s.states >= 1, "localize.states must be >= 1");
    need(s.mass_radius >= 0, "localize.mass_radius must be >= 0");
    need(s.correlator_max >= 1, "localize.correlator_max must be >= 1");
    check_window(s, s.radius + std::ceil(effective_cutoff(s)), s.centers.size());
  } else if (k == "ils") {
    need(!s.ils_L0.empty(), "ils.L0 is required");
    need(s.theta > 0, "ils.theta must be positive");
    for (auto L0 : s.ils_L0)
      need(cube_sites(s.staircase.dim, s.particles, static_cast<int>(L0)) <= kMaxCubeSites,
           "ILS cube exceeds the dense threshold");
  } else if (k == "msa" || k.empty()) {
    if (k == "msa") need(s.particles == 2, "msa needs model.particles = 2");
    ScaleSchedule schedule(s.schedule);
    for (const auto& c : schedule.checks()) items.push_back({c.name, c.ok, c.detail});
    if (k == "msa") {
      schedule.require_valid(s.override_constraints);
      need(s.schedule.L0 >= 3, "schedule.L0 must be >= 3");
      const auto& top = schedule.rows().back();
      const int big = enlarged_radius(static_cast<int>(top.L), s.schedule.tau) + std::max<int>(s.outside_shell, static_cast<int>(top.L));
      if (cube_sites(s.staircase.dim, 2, static_cast<int>(top.L)) > kMaxCubeSites)
        throw Error(ErrorKind::kTooLarge, "top-scale cube exceeds the dense threshold; lower schedule.k_max");
      check_window(s, big, 2);
    }
  } else if (!k.empty()) {
    bad("unknown experiment kind '" + k + "'");
  }
  return items;
}

}  // namespace stairloc::harness
