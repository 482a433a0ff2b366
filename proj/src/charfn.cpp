#include "stairloc/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <string>

#include "stairloc/errors.hpp"
#include "stairloc/potential.hpp"

namespace stairloc {

namespace {

constexpr double kTruncationFloor = 1e-12;
constexpr double kDecayTarget = 1e-12;

std::int64_t isqrt(std::int64_t m) {
  if (m <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(m)));
  while (r * r > m) --r;
  while ((r + 1) * (r + 1) <= m) ++r;
  return r;
}

double atom_variance(std::span<const Atom> atoms) {
  double m = 0.0;
  for (const auto& a : atoms) m += a.probability * a.value;
  double v = 0.0;
  for (const auto& a : atoms) v += a.probability * (a.value - m) * (a.value - m);
  return v;
}

double max_abs_atom(std::span<const Atom> atoms) {
  double m = 0.0;
  for (const auto& a : atoms) m = std::max(m, std::abs(a.value));
  return m;
}

// Counts by one scan of a box around the set, bucketing dist_2(x, S) by plateau.
std::vector<std::int64_t> set_shell_counts(const Staircase& staircase, std::span<const LatticePoint> centers,
                                           std::int64_t first, std::int64_t last) {
  const int d = staircase.dim();
  const std::int64_t outer = staircase.plateau_radius(last + 1);
  LatticePoint lo = centers.front();
  LatticePoint hi = centers.front();
  for (const auto& c : centers) {
    for (int i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], c[i]);
      hi[i] = std::max(hi[i], c[i]);
    }
  }
  double points = 1.0;
  for (int i = 0; i < d; ++i) {
    lo[i] -= static_cast<int>(outer);
    hi[i] += static_cast<int>(outer);
    points *= static_cast<double>(hi[i] - lo[i] + 1);
  }
  if (points * static_cast<double>(centers.size()) > 1e9) {
    throw Error(ErrorKind::kTooLarge, "ShellSum::lattice: shell table for this center set is too large");
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(last - first + 1), 0);
  for_each_in_box(lo, hi, [&](const LatticePoint& x) {
    const std::int64_t k = staircase.plateau_index_sq(squared_distance_to_set(x, centers));
    if (k >= first && k <= last) ++counts[static_cast<std::size_t>(k - first)];
  });
  return counts;
}

}  // namespace

std::int64_t lattice_ball_count(int dim, std::int64_t bound) {
  if (bound <= 0) return 0;
  if (dim == 1) return 2 * isqrt(bound - 1) + 1;
  if (dim < 1 || dim > kMaxDim) throw Error(ErrorKind::kDomain, "lattice_ball_count: dimension must be in [1, 3]");
  const std::int64_t m = isqrt(bound - 1);
  std::int64_t total = lattice_ball_count(dim - 1, bound);
  for (std::int64_t x = 1; x <= m; ++x) total += 2 * lattice_ball_count(dim - 1, bound - x * x);
  return total;
}

std::vector<std::int64_t> origin_shell_counts_serial(const Staircase& staircase, std::int64_t first,
                                                     std::int64_t last) {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(last - first + 1));
  for (std::int64_t n = first; n <= last; ++n) {
    const std::int64_t a = staircase.plateau_radius(n);
    const std::int64_t b = staircase.plateau_radius(n + 1);
    out.push_back(lattice_ball_count(staircase.dim(), b * b) - lattice_ball_count(staircase.dim(), a * a));
  }
  return out;
}

std::vector<std::int64_t> origin_shell_counts(const Staircase& staircase, std::int64_t first, std::int64_t last) {
  const std::int64_t shells = last - first + 1;
  std::vector<std::int64_t> radii(static_cast<std::size_t>(shells + 1));
  for (std::int64_t i = 0; i <= shells; ++i) radii[static_cast<std::size_t>(i)] = staircase.plateau_radius(first + i);
  std::vector<std::int64_t> ball(radii.size());
  const int d = staircase.dim();
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i <= shells; ++i) {
    const std::int64_t r = radii[static_cast<std::size_t>(i)];
    ball[static_cast<std::size_t>(i)] = lattice_ball_count(d, r * r);
  }
  std::vector<std::int64_t> out(static_cast<std::size_t>(shells));
  for (std::int64_t i = 0; i < shells; ++i) {
    out[static_cast<std::size_t>(i)] = ball[static_cast<std::size_t>(i + 1)] - ball[static_cast<std::size_t>(i)];
  }
  return out;
}

ShellSum ShellSum::abstract(double c, int dim, double decay, std::int64_t first, std::int64_t last,
                            std::int64_t max_shell) {
  if (!(c > 0.0)) throw Error(ErrorKind::kConfig, "ShellSum: c must be positive");
  if (dim < 1 || !(decay > dim)) throw Error(ErrorKind::kConfig, "ShellSum: need decay > dim >= 1");
  if (first < 1) throw Error(ErrorKind::kConfig, "ShellSum: first shell must be >= 1");
  if (last != kUnbounded && last < first) throw Error(ErrorKind::kConfig, "ShellSum: last < first");
  ShellSum s;
  s.source_ = Source::kAbstract;
  s.first_ = first;
  s.last_ = last;
  s.c_ = c;
  s.dim_ = dim;
  s.decay_ = decay;
  const std::int64_t end = last == kUnbounded ? std::max(max_shell, first) : last;
  for (std::int64_t n = first; n <= end; ++n) {
    const double nn = static_cast<double>(n);
    s.amplitude_.push_back(std::pow(nn, -decay));
    s.count_.push_back(static_cast<std::int64_t>(std::ceil(c * std::pow(nn, dim - 1) - 1e-12)));
  }
  return s;
}

ShellSum ShellSum::lattice(const Staircase& staircase, std::vector<LatticePoint> centers, std::int64_t first,
                           std::int64_t last, std::int64_t max_shell) {
  if (centers.empty()) throw Error(ErrorKind::kConfig, "ShellSum: center set must be nonempty");
  if (first < 1) throw Error(ErrorKind::kConfig, "ShellSum: first shell must be >= 1");
  if (last != kUnbounded && last < first) throw Error(ErrorKind::kConfig, "ShellSum: last < first");
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  ShellSum s;
  s.source_ = Source::kLattice;
  s.first_ = first;
  s.last_ = last;
  s.stair_ = staircase.params();
  s.dim_ = staircase.dim();
  s.decay_ = staircase.params().decay;
  s.centers_ = centers.size();
  const std::int64_t end = last == kUnbounded ? std::max(max_shell, first) : last;
  s.count_ = centers.size() == 1 ? origin_shell_counts(staircase, first, end)
                                 : set_shell_counts(staircase, centers, first, end);
  for (std::int64_t n = first; n <= end; ++n) s.amplitude_.push_back(staircase.plateau_value(n));
  if (last == kUnbounded) {
    const double r = static_cast<double>(staircase.plateau_radius(end + 1));
    s.tail_[0] = static_cast<double>(centers.size()) * tail_bound(staircase, r);
    s.tail_[1] = static_cast<double>(centers.size()) * tail_bound(staircase.powered(2.0), r);
  }
  return s;
}

std::int64_t ShellSum::total_count() const {
  std::int64_t t = 0;
  for (auto k : count_) t += k;
  return t;
}

double ShellSum::tail_weight(std::int64_t after, int power) const {
  if (power != 1 && power != 2) throw Error(ErrorKind::kDomain, "tail_weight: power must be 1 or 2");
  double sum = 0.0;
  for (std::int64_t n = std::max(after + 1, first_); n <= table_last(); ++n) {
    sum += static_cast<double>(count(n)) * std::pow(amplitude(n), power);
  }
  if (bounded()) return sum;
  if (source_ == Source::kLattice) return sum + tail_[static_cast<std::size_t>(power - 1)];
  const double t = static_cast<double>(std::max(after, table_last()));
  const double pa = power * decay_;
  return sum + (c_ * std::pow(t, dim_ - pa) / (pa - dim_) + std::pow(t, 1.0 - pa) / (pa - 1.0)) * (1.0 + 1e-12);
}

ShellSum ShellSum::slice(std::int64_t m, std::int64_t n) const {
  if (m < first_ || n > table_last() || n < m) throw Error(ErrorKind::kDomain, "ShellSum::slice: outside the table");
  ShellSum s = *this;
  s.first_ = m;
  s.last_ = n;
  s.amplitude_.assign(amplitude_.begin() + (m - first_), amplitude_.begin() + (n - first_ + 1));
  s.count_.assign(count_.begin() + (m - first_), count_.begin() + (n - first_ + 1));
  s.tail_ = {0.0, 0.0};
  return s;
}

double log_abs_atom_charfn(std::span<const Atom> atoms, double s) {
  if (atoms.size() <= 1) return 0.0;
  // |phi|^2 = 1 - 4 sum_{j<k} p_j p_k sin^2(s (v_k - v_j) / 2)
  double x = 0.0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    for (std::size_t k = j + 1; k < atoms.size(); ++k) {
      const double sn = std::sin(0.5 * s * (atoms[k].value - atoms[j].value));
      x += 4.0 * atoms[j].probability * atoms[k].probability * sn * sn;
    }
  }
  if (x < 0.5) return 0.5 * std::log1p(-x);
  double y = 0.0;
  if (atoms.size() == 2) {
    const double p = atoms[0].probability;
    const double q = atoms[1].probability;
    const double cs = std::cos(0.5 * s * (atoms[1].value - atoms[0].value));
    y = (p - q) * (p - q) + 4.0 * p * q * cs * cs;
  } else {
    const auto phi = atom_charfn(atoms, s);
    y = std::norm(phi);
  }
  if (!(y > 0.0)) return -std::numeric_limits<double>::infinity();
  return 0.5 * std::log(y);
}

std::complex<double> atom_charfn(std::span<const Atom> atoms, double s) {
  double re = 0.0;
  double im = 0.0;
  for (const auto& a : atoms) {
    re += a.probability * std::cos(s * a.value);
    im += a.probability * std::sin(s * a.value);
  }
  return {re, im};
}

namespace {

double log_abs_charfn_impl(const ShellSum& sum, std::span<const Atom> atoms, double var, double t) {
  if (t == 0.0) return 0.0;
  double value = 0.0;
  for (std::int64_t n = sum.first(); n <= sum.table_last(); ++n) {
    value += static_cast<double>(sum.count(n)) * log_abs_atom_charfn(atoms, sum.amplitude(n) * t);
  }
  if (!sum.bounded() && std::isfinite(value)) {
    const double bound = var * t * t * sum.tail_weight(sum.table_last(), 2);
    const double allowed = std::max(kTruncationFloor, kTruncationFloor * std::abs(value));
    if (!(bound <= allowed) || var * t * t * sum.amplitude(sum.table_last()) * sum.amplitude(sum.table_last()) > 0.5) {
      throw TruncationError("log_abs_charfn: shell table too short for t = " + std::to_string(t) +
                                " (dropped-shell bound " + std::to_string(bound) + ")",
                            static_cast<double>(sum.table_last()));
    }
  }
  return value;
}

}  // namespace

double log_abs_charfn(const ShellSum& sum, const AmplitudeDistribution& dist, double t) {
  const auto atoms = dist.support();
  return log_abs_charfn_impl(sum, atoms, atom_variance(atoms), t);
}

std::vector<double> log_abs_charfn_serial(const ShellSum& sum, const AmplitudeDistribution& dist,
                                          std::span<const double> ts) {
  const auto atoms = dist.support();
  const double var = atom_variance(atoms);
  std::vector<double> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) out[i] = log_abs_charfn_impl(sum, atoms, var, ts[i]);
  return out;
}

std::vector<double> log_abs_charfn(const ShellSum& sum, const AmplitudeDistribution& dist,
                                   std::span<const double> ts) {
  const auto atoms = dist.support();
  const double var = atom_variance(atoms);
  std::vector<double> out(ts.size());
  std::vector<std::exception_ptr> errors(ts.size());
  const auto n = static_cast<std::int64_t>(ts.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = log_abs_charfn_impl(sum, atoms, var, ts[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::complex<double> charfn(const ShellSum& sum, const AmplitudeDistribution& dist, double t) {
  const auto atoms = dist.support();
  double log_abs = 0.0;
  double phase = 0.0;
  for (std::int64_t n = sum.first(); n <= sum.table_last(); ++n) {
    const auto phi = atom_charfn(atoms, sum.amplitude(n) * t);
    if (phi == 0.0) return 0.0;
    const double k = static_cast<double>(sum.count(n));
    log_abs += k * log_abs_atom_charfn(atoms, sum.amplitude(n) * t);
    phase += k * std::arg(phi);
  }
  return std::polar(std::exp(log_abs), std::remainder(phase, 2.0 * std::numbers::pi));
}

double mean(const ShellSum& sum, const AmplitudeDistribution& dist) {
  double w = 0.0;
  for (std::int64_t n = sum.first(); n <= sum.table_last(); ++n) w += static_cast<double>(sum.count(n)) * sum.amplitude(n);
  return w * dist.mean();
}

double variance(const ShellSum& sum, const AmplitudeDistribution& dist) {
  double w = 0.0;
  for (std::int64_t n = sum.first(); n <= sum.table_last(); ++n) {
    w += static_cast<double>(sum.count(n)) * sum.amplitude(n) * sum.amplitude(n);
  }
  return w * dist.variance();
}

DecayFit fit_decay_exponent(std::span<const double> t, std::span<const double> minus_log_abs, double window_decades) {
  if (t.size() != minus_log_abs.size()) throw Error(ErrorKind::kDomain, "fit_decay_exponent: size mismatch");
  DecayFit fit;
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double m = minus_log_abs[i];
    if (!(t[i] > 0.0) || !std::isfinite(m) || !(m > 0.0)) {
      ++fit.dropped;
      continue;
    }
    fit.t.push_back(t[i]);
    fit.minus_log_abs.push_back(m);
    lx.push_back(std::log(t[i]));
    ly.push_back(std::log(m));
  }
  const auto global = least_squares(lx, ly);
  fit.slope = global.slope;
  fit.intercept = global.intercept;
  const double span = window_decades * std::log(10.0);
  for (std::size_t i = 0; i < lx.size(); ++i) {
    std::size_t j = i;
    while (j + 1 < lx.size() && lx[j + 1] <= lx[i] + span * (1.0 + 1e-12)) ++j;
    const bool complete = j + 1 < lx.size() || lx[j] >= lx[i] + span * (1.0 - 1e-9);
    if (!complete || j - i + 1 < 3) continue;
    const auto local = least_squares(std::span<const double>(lx).subspan(i, j - i + 1),
                                     std::span<const double>(ly).subspan(i, j - i + 1));
    fit.window_center.push_back((lx[i] + 0.5 * span) / std::log(10.0));
    fit.local_slope.push_back(local.slope);
  }
  return fit;
}

DecayFit decay_exponent_fit(const ShellSum& sum, const AmplitudeDistribution& dist, std::span<const double> t_grid,
                            double window_decades) {
  const auto values = log_abs_charfn(sum, dist, t_grid);
  std::vector<double> m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m[i] = -values[i];
  return fit_decay_exponent(t_grid, m, window_decades);
}

DensityResult density_reconstruct(const ShellSum& sum, const AmplitudeDistribution& dist,
                                  std::span<const double> v_grid, double t_max) {
  if (!(t_max > 0.0)) throw Error(ErrorKind::kDomain, "density_reconstruct: t_max must be positive");
  const auto atoms = dist.support();
  const double top = log_abs_charfn(sum, dist, t_max);
  if (!(top <= std::log(kDecayTarget))) {
    throw TruncationError("density_reconstruct: |phi(t_max)| = " + std::to_string(std::exp(top)) +
                              " exceeds 1e-12; raise t_max",
                          t_max);
  }
  double weight = 0.0;
  for (std::int64_t n = sum.first(); n <= sum.table_last(); ++n) weight += static_cast<double>(sum.count(n)) * sum.amplitude(n);
  double lo = weight * dist.min_value();
  double hi = weight * dist.max_value();
  for (double v : v_grid) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double width = std::max(hi - lo, 1e-9);
  // Period 2 pi / h = 2 * width keeps aliased copies off the grid.
  auto steps = static_cast<std::int64_t>(std::ceil(t_max * width / std::numbers::pi));
  if (steps % 2 != 0) ++steps;
  const double h = t_max / static_cast<double>(steps);

  auto evaluate = [&](double t, double& amp, double& phase) {
    double la = 0.0;
    double ph = 0.0;
    for (std::int64_t n = sum.first(); n <= sum.table_last(); ++n) {
      const double s = sum.amplitude(n) * t;
      const double k = static_cast<double>(sum.count(n));
      la += k * log_abs_atom_charfn(atoms, s);
      ph += k * std::arg(atom_charfn(atoms, s));
    }
    amp = std::exp(la);
    phase = ph;
  };

  std::vector<double> amp(static_cast<std::size_t>(steps + 1));
  std::vector<double> phase(amp.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j <= steps; ++j) {
    evaluate(h * static_cast<double>(j), amp[static_cast<std::size_t>(j)], phase[static_cast<std::size_t>(j)]);
  }

  DensityResult out;
  out.v.assign(v_grid.begin(), v_grid.end());
  out.density.assign(v_grid.size(), 0.0);
  out.t_max = t_max;
  out.step = h;
  const auto nv = static_cast<std::int64_t>(v_grid.size());
  std::vector<double> coarse_diff(v_grid.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nv; ++i) {
    const double v = v_grid[static_cast<std::size_t>(i)];
    double fine = 0.0;
    double coarse = 0.0;
    for (std::int64_t j = 0; j <= steps; ++j) {
      const double t = h * static_cast<double>(j);
      const double w = (j == 0 || j == steps) ? 0.5 : 1.0;
      const double term = amp[static_cast<std::size_t>(j)] * std::cos(phase[static_cast<std::size_t>(j)] - t * v);
      fine += w * term;
      if (j % 2 == 0) coarse += w * term;
    }
    fine *= h / std::numbers::pi;
    coarse *= 2.0 * h / std::numbers::pi;
    out.density[static_cast<std::size_t>(i)] = fine;
    coarse_diff[static_cast<std::size_t>(i)] = std::abs(fine - coarse);
  }
  for (double e : coarse_diff) out.quadrature_error = std::max(out.quadrature_error, e);

  constexpr int kTailPoints = 256;
  double tail = 0.0;
  for (int j = 0; j <= kTailPoints; ++j) {
    const double t = t_max * (1.0 + static_cast<double>(j) / kTailPoints);
    double a = 0.0;
    double p = 0.0;
    evaluate(t, a, p);
    tail += (j == 0 || j == kTailPoints ? 0.5 : 1.0) * a;
  }
  out.truncation_error = tail * (t_max / kTailPoints) / std::numbers::pi;
  if (!sum.bounded()) out.location_uncertainty = max_abs_atom(atoms) * sum.tail_weight(sum.table_last(), 1);
  return out;
}

namespace {

struct WeightedValue {
  double value;
  double weight;
};

// All ways to place `k` IID draws among the atoms, with multinomial weights.
std::vector<WeightedValue> shell_law(std::span<const Atom> atoms, std::int64_t k, double amplitude) {
  std::vector<WeightedValue> out;
  std::vector<std::int64_t> c(atoms.size(), 0);
  const double log_kfact = std::lgamma(static_cast<double>(k) + 1.0);
  auto emit = [&]() {
    double lw = log_kfact;
    double v = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      const double cj = static_cast<double>(c[j]);
      lw += cj * std::log(atoms[j].probability) - std::lgamma(cj + 1.0);
      v += cj * atoms[j].value;
    }
    out.push_back({amplitude * v, std::exp(lw)});
  };
  // Odometer over compositions of k into atoms.size() parts.
  auto recurse = [&](auto&& self, std::size_t j, std::int64_t left) -> void {
    if (j + 1 == atoms.size()) {
      c[j] = left;
      emit();
      return;
    }
    for (std::int64_t x = 0; x <= left; ++x) {
      c[j] = x;
      self(self, j + 1, left - x);
    }
  };
  recurse(recurse, 0, k);
  return out;
}

double compositions(std::int64_t k, std::size_t parts) {
  // C(k + parts - 1, parts - 1)
  double r = 1.0;
  for (std::size_t i = 1; i < parts; ++i) r = r * static_cast<double>(k + static_cast<std::int64_t>(i)) / static_cast<double>(i);
  return std::round(r);
}

}  // namespace

ShellDistribution ShellDistribution::exact(const ShellSum& sum, const AmplitudeDistribution& dist,
                                           std::uint64_t budget) {
  if (!sum.bounded()) throw Error(ErrorKind::kDomain, "ShellDistribution: shell sum must be bounded");
  const auto atoms = dist.support();
  double total = 1.0;
  for (std::int64_t n = sum.first(); n <= sum.last(); ++n) {
    total *= compositions(sum.count(n), atoms.size());
    if (total > static_cast<double>(budget)) {
      throw Error(ErrorKind::kEnumerationTooLarge,
                  "ShellDistribution: enumeration exceeds the budget of " + std::to_string(budget) + " configurations");
    }
  }
  std::vector<WeightedValue> law{{0.0, 1.0}};
  for (std::int64_t n = sum.first(); n <= sum.last(); ++n) {
    const auto shell = shell_law(atoms, sum.count(n), sum.amplitude(n));
    std::vector<WeightedValue> next;
    next.reserve(law.size() * shell.size());
    for (const auto& a : law) {
      for (const auto& b : shell) next.push_back({a.value + b.value, a.weight * b.weight});
    }
    law.swap(next);
  }
  std::sort(law.begin(), law.end(), [](const WeightedValue& a, const WeightedValue& b) { return a.value < b.value; });
  ShellDistribution out;
  out.exact_ = true;
  out.configurations_ = static_cast<std::uint64_t>(total);
  double acc = 0.0;
  for (const auto& w : law) {
    if (!out.values_.empty() && out.values_.back() == w.value) {
      acc += w.weight;
      out.cumulative_.back() = acc;
      continue;
    }
    acc += w.weight;
    out.values_.push_back(w.value);
    out.cumulative_.push_back(acc);
  }
  return out;
}

ShellDistribution ShellDistribution::sampled(const ShellSum& sum, const AmplitudeDistribution& dist,
                                             std::size_t samples, std::uint64_t seed) {
  if (!sum.bounded()) throw Error(ErrorKind::kDomain, "ShellDistribution: shell sum must be bounded");
  if (samples == 0) throw Error(ErrorKind::kConfig, "ShellDistribution: need at least one sample");
  ShellDistribution out;
  out.exact_ = false;
  out.samples_ = samples;
  out.values_.resize(samples);
  const auto n = static_cast<std::int64_t>(samples);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    out.values_[static_cast<std::size_t>(i)] = sample_shell_sum(sum, dist, seed, static_cast<std::uint64_t>(i));
  }
  std::sort(out.values_.begin(), out.values_.end());
  return out;
}

ShellDistribution ShellDistribution::build(const ShellSum& sum, const AmplitudeDistribution& dist,
                                           std::size_t samples, std::uint64_t seed, std::uint64_t budget) {
  try {
    return exact(sum, dist, budget);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kEnumerationTooLarge) throw;
  }
  return sampled(sum, dist, samples, seed);
}

BinomialEstimate ShellDistribution::interval(double lo, double hi) const {
  BinomialEstimate out;
  if (hi < lo) {
    out.hi = 0.0;
    return out;
  }
  const double tol = 1e-12 * std::max({1.0, std::abs(values_.front()), std::abs(values_.back())});
  const auto first = std::lower_bound(values_.begin(), values_.end(), lo - tol) - values_.begin();
  const auto last = std::upper_bound(values_.begin(), values_.end(), hi + tol) - values_.begin();
  if (!exact_) return wilson_interval(static_cast<std::uint64_t>(last - first), samples_);
  double p = 0.0;
  if (last > first) {
    p = cumulative_[static_cast<std::size_t>(last - 1)] - (first > 0 ? cumulative_[static_cast<std::size_t>(first - 1)] : 0.0);
  }
  p = std::clamp(p, 0.0, 1.0);
  out.p = p;
  out.lo = p;
  out.hi = p;
  return out;
}

BinomialEstimate small_interval_prob(const ShellDistribution& law, double a, double eps) {
  if (eps < 0.0) throw Error(ErrorKind::kDomain, "small_interval_prob: eps must be >= 0");
  return law.interval(a, a + eps);
}

BinomialEstimate max_interval_prob(const ShellDistribution& law, double eps) {
  if (eps < 0.0) throw Error(ErrorKind::kDomain, "max_interval_prob: eps must be >= 0");
  BinomialEstimate best;
  best.hi = 0.0;
  // Some maximising interval starts at a support point.
  double prev = -std::numeric_limits<double>::infinity();
  for (double a : law.support_points()) {
    if (a == prev) continue;
    prev = a;
    const auto e = law.interval(a, a + eps);
    if (e.p > best.p || (e.p == best.p && e.hi > best.hi)) best = e;
  }
  return best;
}

BinomialEstimate edge_tail(const ShellDistribution& law, const ShellSum& sum, const AmplitudeDistribution& dist,
                           double lambda) {
  BinomialEstimate zero;
  zero.hi = 0.0;
  if (lambda < 0.0) return zero;
  double weight = 0.0;
  for (std::int64_t n = sum.first(); n <= sum.table_last(); ++n) weight += static_cast<double>(sum.count(n)) * sum.amplitude(n);
  const double v_star = weight * dist.min_value();
  return law.interval(-std::numeric_limits<double>::infinity(), v_star + lambda);
}

double sample_shell_sum(const ShellSum& sum, const AmplitudeDistribution& dist, std::uint64_t seed,
                        std::uint64_t trial) {
  double s = 0.0;
  for (std::int64_t n = sum.first(); n <= sum.table_last(); ++n) {
    double shell = 0.0;
    for (std::int64_t k = 0; k < sum.count(n); ++k) {
      const LatticePoint key{static_cast<int>(n), static_cast<int>(k)};
      shell += dist.quantile(unit_interval(site_hash(seed, key, trial)));
    }
    s += sum.amplitude(n) * shell;
  }
  return s;
}

std::vector<std::complex<double>> empirical_charfn(std::span<const double> samples, std::span<const double> ts) {
  std::vector<std::complex<double>> out(ts.size());
  const double inv = 1.0 / static_cast<double>(std::max<std::size_t>(samples.size(), 1));
  const auto n = static_cast<std::int64_t>(ts.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const double t = ts[static_cast<std::size_t>(i)];
    double re = 0.0;
    double im = 0.0;
    for (double s : samples) {
      re += std::cos(t * s);
      im += std::sin(t * s);
    }
    out[static_cast<std::size_t>(i)] = {re * inv, im * inv};
  }
  return out;
}

}  // namespace stairloc
