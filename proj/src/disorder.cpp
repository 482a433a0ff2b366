#include "stairloc/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stairloc/errors.hpp"

namespace stairloc {

namespace {

constexpr double kProbabilityTolerance = 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::vector<Atom> normalise_atoms(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
  return atoms;
}

}  // namespace

AmplitudeDistribution AmplitudeDistribution::bernoulli(double p) {
  AmplitudeDistribution d;
  d.law_ = BernoulliLaw{p};
  return d;
}

AmplitudeDistribution AmplitudeDistribution::uniform() {
  AmplitudeDistribution d;
  d.law_ = UniformLaw{};
  return d;
}

AmplitudeDistribution AmplitudeDistribution::atoms(std::vector<Atom> atoms) {
  AmplitudeDistribution d;
  d.law_ = AtomicLaw{normalise_atoms(std::move(atoms))};
  return d;
}

void AmplitudeDistribution::validate(bool require_nontrivial) const {
  if (const auto* b = std::get_if<BernoulliLaw>(&law_)) {
    if (!(b->p >= 0.0 && b->p <= 1.0)) throw Error(ErrorKind::kConfig, "bernoulli: p must be in [0, 1]");
    if (require_nontrivial && (b->p == 0.0 || b->p == 1.0)) {
      throw Error(ErrorKind::kConfig, "bernoulli: law concentrated on a single point");
    }
    return;
  }
  if (std::holds_alternative<UniformLaw>(law_)) return;
  const auto& atoms = std::get<AtomicLaw>(law_).atoms;
  double total = 0.0;
  int positive = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& a = atoms[i];
    if (!(a.value >= 0.0 && a.value <= 1.0)) throw Error(ErrorKind::kConfig, "atoms: values must lie in [0, 1]");
    if (!(a.probability >= 0.0)) throw Error(ErrorKind::kConfig, "atoms: negative probability");
    if (i > 0 && atoms[i - 1].value == a.value) throw Error(ErrorKind::kConfig, "atoms: duplicate value");
    total += a.probability;
    if (a.probability > 0.0) ++positive;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw Error(ErrorKind::kConfig, "atoms: probabilities must sum to 1");
  }
  if (require_nontrivial && positive < 2) {
    throw Error(ErrorKind::kConfig, "atoms: law concentrated on a single point");
  }
}

double AmplitudeDistribution::quantile(double u) const {
  if (const auto* b = std::get_if<BernoulliLaw>(&law_)) return u < b->p ? 1.0 : 0.0;
  if (std::holds_alternative<UniformLaw>(law_)) return u;
  const auto& atoms = std::get<AtomicLaw>(law_).atoms;
  double cumulative = 0.0;
  for (const auto& a : atoms) {
    cumulative += a.probability;
    if (u < cumulative) return a.value;
  }
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    if (it->probability > 0.0) return it->value;
  }
  return atoms.back().value;
}

std::vector<Atom> AmplitudeDistribution::support() const {
  std::vector<Atom> out;
  if (const auto* b = std::get_if<BernoulliLaw>(&law_)) {
    if (b->p < 1.0) out.push_back({0.0, 1.0 - b->p});
    if (b->p > 0.0) out.push_back({1.0, b->p});
    return out;
  }
  if (std::holds_alternative<UniformLaw>(law_)) {
    throw Error(ErrorKind::kUnsupported, "uniform law has no atoms");
  }
  for (const auto& a : std::get<AtomicLaw>(law_).atoms) {
    if (a.probability > 0.0) out.push_back(a);
  }
  return out;
}

double AmplitudeDistribution::min_value() const {
  if (std::holds_alternative<UniformLaw>(law_)) return 0.0;
  return support().front().value;
}

double AmplitudeDistribution::max_value() const {
  if (std::holds_alternative<UniformLaw>(law_)) return 1.0;
  return support().back().value;
}

double AmplitudeDistribution::mean() const {
  if (std::holds_alternative<UniformLaw>(law_)) return 0.5;
  double m = 0.0;
  for (const auto& a : support()) m += a.value * a.probability;
  return m;
}

double AmplitudeDistribution::variance() const {
  if (std::holds_alternative<UniformLaw>(law_)) return 1.0 / 12.0;
  const double m = mean();
  double v = 0.0;
  for (const auto& a : support()) v += (a.value - m) * (a.value - m) * a.probability;
  return v;
}

std::string AmplitudeDistribution::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* b = std::get_if<BernoulliLaw>(&law_)) {
    os << "bernoulli(p=" << b->p << ")";
  } else if (std::holds_alternative<UniformLaw>(law_)) {
    os << "uniform[0,1]";
  } else {
    os << "atoms(";
    bool first = true;
    for (const auto& a : std::get<AtomicLaw>(law_).atoms) {
      os << (first ? "" : ", ") << a.value << ":" << a.probability;
      first = false;
    }
    os << ")";
  }
  return os.str();
}

std::uint64_t site_hash(std::uint64_t seed, const LatticePoint& site, std::uint64_t trial) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ trial);
  h = splitmix64(h ^ static_cast<std::uint64_t>(site.dim()));
  for (int c : site.coords()) {
    h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(c)));
  }
  return h;
}

double unit_interval(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

DisorderConfig DisorderConfig::sample(std::vector<LatticePoint> window, const AmplitudeDistribution& dist,
                                      std::uint64_t master_seed) {
  DisorderConfig c;
  std::sort(window.begin(), window.end());
  window.erase(std::unique(window.begin(), window.end()), window.end());
  c.window_ = std::move(window);
  c.master_seed_ = master_seed;
  c.dist_ = std::make_shared<const AmplitudeDistribution>(dist);
  c.amplitudes_.resize(c.window_.size());
  c.trials_.assign(c.window_.size(), 0);
  for (std::size_t i = 0; i < c.window_.size(); ++i) {
    c.amplitudes_[i] = dist.quantile(unit_interval(site_hash(master_seed, c.window_[i], 0)));
  }
  c.build_index();
  return c;
}

DisorderConfig DisorderConfig::from_values(std::vector<LatticePoint> window, std::vector<double> amplitudes) {
  if (window.size() != amplitudes.size()) throw Error(ErrorKind::kDomain, "from_values: size mismatch");
  std::vector<std::size_t> order(window.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return window[a] < window[b]; });
  DisorderConfig c;
  for (std::size_t i : order) {
    if (!c.window_.empty() && c.window_.back() == window[i]) throw Error(ErrorKind::kDomain, "from_values: duplicate site");
    c.window_.push_back(window[i]);
    c.amplitudes_.push_back(amplitudes[i]);
  }
  c.trials_.assign(c.window_.size(), 0);
  c.build_index();
  return c;
}

void DisorderConfig::build_index() {
  index_.clear();
  index_.reserve(window_.size());
  for (std::size_t i = 0; i < window_.size(); ++i) index_.emplace(window_[i], i);
}

DisorderConfig DisorderConfig::resample_region(std::span<const LatticePoint> region, std::uint64_t trial) const {
  if (!dist_) throw Error(ErrorKind::kDomain, "resample_region: configuration has no sampling law");
  DisorderConfig c = *this;
  for (const auto& y : region) {
    auto it = index_.find(y);
    if (it == index_.end()) throw Error(ErrorKind::kDomain, "resample_region: region not inside the window");
    c.amplitudes_[it->second] = dist_->quantile(unit_interval(site_hash(master_seed_, y, trial)));
    c.trials_[it->second] = trial;
  }
  return c;
}

DisorderConfig DisorderConfig::with_values(std::span<const LatticePoint> region, std::span<const double> values) const {
  if (region.size() != values.size()) throw Error(ErrorKind::kDomain, "with_values: size mismatch");
  DisorderConfig c = *this;
  for (std::size_t i = 0; i < region.size(); ++i) {
    auto it = index_.find(region[i]);
    if (it == index_.end()) throw Error(ErrorKind::kDomain, "with_values: region not inside the window");
    c.amplitudes_[it->second] = values[i];
  }
  return c;
}

DisorderConfig DisorderConfig::fill_outside(std::span<const LatticePoint> keep, double value) const {
  DisorderConfig c = *this;
  std::vector<char> kept(window_.size(), 0);
  for (const auto& y : keep) {
    auto it = index_.find(y);
    if (it != index_.end()) kept[it->second] = 1;
  }
  for (std::size_t i = 0; i < window_.size(); ++i) {
    if (!kept[i]) c.amplitudes_[i] = value;
  }
  return c;
}

std::optional<double> DisorderConfig::amplitude(const LatticePoint& site) const {
  auto it = index_.find(site);
  if (it == index_.end()) return std::nullopt;
  return amplitudes_[it->second];
}

std::uint64_t DisorderConfig::trial_of(const LatticePoint& site) const {
  auto it = index_.find(site);
  if (it == index_.end()) throw Error(ErrorKind::kDomain, "trial_of: site not in window");
  return trials_[it->second];
}

std::vector<LatticePoint> window_around(std::span<const LatticePoint> centers, int radius) {
  std::vector<LatticePoint> out;
  for (const auto& c : centers) {
    auto more = sites(Cube{c, radius});
    out.insert(out.end(), more.begin(), more.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ConfigEnumerator::ConfigEnumerator(std::size_t sites, std::vector<Atom> atoms, std::uint64_t budget)
    : atoms_(std::move(atoms)), digits_(sites, 0), values_(sites, 0.0) {
  if (atoms_.empty()) throw Error(ErrorKind::kDomain, "enumerate_configs: no atoms");
  long double total = 1.0L;
  for (std::size_t i = 0; i < sites; ++i) {
    total *= static_cast<long double>(atoms_.size());
    if (total > static_cast<long double>(budget)) {
      throw Error(ErrorKind::kEnumerationTooLarge, "enumerate_configs: " + std::to_string(atoms_.size()) + "^" +
                                                       std::to_string(sites) + " exceeds the budget");
    }
  }
}

bool ConfigEnumerator::next() {
  if (done_) return false;
  if (!started_) {
    started_ = true;
  } else {
    std::size_t i = digits_.size();
    while (i > 0) {
      --i;
      if (++digits_[i] < atoms_.size()) break;
      digits_[i] = 0;
      if (i == 0) {
        done_ = true;
        return false;
      }
    }
    if (digits_.empty()) {
      done_ = true;
      return false;
    }
  }
  weight_ = 1.0;
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    values_[i] = atoms_[digits_[i]].value;
    weight_ *= atoms_[digits_[i]].probability;
  }
  ++count_;
  return true;
}

}  // namespace stairloc
