#include "stairloc/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stairloc/errors.hpp"

namespace stairloc {

namespace {

constexpr std::int64_t kTailPointBudget = std::int64_t{1} << 20;

double unit_sphere_area(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw Error(ErrorKind::kDomain, "unit_sphere_area: dimension must be in [1, 3]");
  }
}

// Largest W with (2W + 1)^d <= budget.
std::int64_t budget_radius(int d) {
  const double side = std::floor(std::pow(static_cast<double>(kTailPointBudget), 1.0 / d) + 1e-9);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>((side - 1.0) / 2.0));
}

// sum over lattice points y with R <= |y| < W of u(|y|).
double exact_shell_sum(const Staircase& stair, double radius, std::int64_t outer) {
  const int d = stair.dim();
  const double r_sq = radius * radius;
  const std::int64_t outer_sq = outer * outer;
  double sum = 0.0;
  if (d == 1) {
    for (auto m = static_cast<std::int64_t>(std::ceil(radius)); m < outer; ++m) {
      sum += 2.0 * stair.value_sq(m * m);
    }
    return sum;
  }
  const auto w = static_cast<int>(outer);
  LatticePoint lo = LatticePoint::origin(d);
  LatticePoint hi = LatticePoint::origin(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = -w;
    hi[i] = w;
  }
  const LatticePoint zero = LatticePoint::origin(d);
  for_each_in_box(lo, hi, [&](const LatticePoint& y) {
    const std::int64_t s = squared_distance(y, zero);
    if (static_cast<double>(s) >= r_sq && s < outer_sq) sum += stair.value_sq(s);
  });
  return sum;
}

double envelope_tail(const Staircase& stair, std::int64_t from) {
  const auto& p = stair.params();
  const int d = p.dim;
  const std::int64_t k = stair.plateau_index(static_cast<double>(from));
  const long double kk = static_cast<long double>(k);
  const long double ratio = std::pow(kk + 1.0L, static_cast<long double>(p.kappa)) /
                            (std::pow(kk, static_cast<long double>(p.kappa)) - 1.0L);
  const long double c_env = std::pow(ratio, static_cast<long double>(p.decay));
  const long double h = std::sqrt(static_cast<long double>(d)) / 2.0L;
  const long double s0 = static_cast<long double>(from) - 2.0L * h;
  const long double lattice_sum = unit_sphere_area(d) * std::pow(1.0L + h / s0, static_cast<long double>(d - 1)) *
                                  std::pow(s0, static_cast<long double>(d) - p.decay) /
                                  (static_cast<long double>(p.decay) - d);
  return static_cast<double>(c_env * lattice_sum * (1.0L + 1e-12L));
}

}  // namespace

void InteractionParams::validate() const {
  if (!(strength >= 0.0)) throw Error(ErrorKind::kConfig, "interaction strength u0 must be >= 0");
  if (!(range >= 0.0)) throw Error(ErrorKind::kConfig, "interaction range r0 must be >= 0");
}

double cumulative_potential(const LatticePoint& x, const DisorderConfig& config, const Staircase& staircase) {
  const auto& window = config.window();
  const auto amps = config.amplitudes();
  double v = 0.0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (amps[i] == 0.0) continue;
    v += staircase.value_sq(squared_distance(x, window[i])) * amps[i];
  }
  return v;
}

std::vector<double> cumulative_potential_serial(std::span<const LatticePoint> xs, const DisorderConfig& config,
                                                const Staircase& staircase) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = cumulative_potential(xs[i], config, staircase);
  return out;
}

std::vector<double> cumulative_potential(std::span<const LatticePoint> xs, const DisorderConfig& config,
                                         const Staircase& staircase) {
  std::vector<double> out(xs.size());
  const auto n = static_cast<std::int64_t>(xs.size());
#pragma omp parallel for schedule(static) if (n * static_cast<std::int64_t>(config.size()) > 200000)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = cumulative_potential(xs[static_cast<std::size_t>(i)], config, staircase);
  }
  return out;
}

double tail_bound(const Staircase& staircase, double radius) {
  if (!(radius >= 1.0)) throw Error(ErrorKind::kDomain, "tail_bound: radius must be >= 1");
  const int d = staircase.dim();
  const std::int64_t min_outer = std::max<std::int64_t>(staircase.plateau_radius(2), 2);
  const std::int64_t radius_ceil = static_cast<std::int64_t>(std::ceil(radius));
  std::int64_t outer = std::max(radius_ceil, min_outer);
  const std::int64_t budget = budget_radius(d);
  if (2 * radius_ceil <= budget) outer = std::max(outer, 2 * radius_ceil);
  else if (outer < budget) outer = budget;
  double exact = 0.0;
  if (static_cast<double>(outer) > radius) exact = exact_shell_sum(staircase, radius, outer);
  return exact + envelope_tail(staircase, outer);
}

double certified_cutoff(const Staircase& staircase, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::kDomain, "certified_cutoff: tolerance must be positive");
  double hi = 1.0;
  while (tail_bound(staircase, hi) > tol) {
    hi *= 2.0;
    if (hi > 1e12) throw Error(ErrorKind::kRange, "certified_cutoff: tolerance unreachable");
  }
  double lo = std::max(1.0, hi / 2.0);
  if (lo == hi) return hi;
  while (hi - lo > 1.0) {
    const double mid = std::floor((lo + hi) / 2.0);
    if (tail_bound(staircase, mid) <= tol) hi = mid;
    else lo = mid;
  }
  return hi;
}

double interaction_energy(const MultiPoint& x, const InteractionParams& params) {
  if (x.count < 2 || params.strength == 0.0) return 0.0;
  const double dist_sq = static_cast<double>(squared_distance(x.particle[0], x.particle[1]));
  return dist_sq <= params.range * params.range ? params.strength : 0.0;
}

std::int64_t constant_plateau_on_cube(const Cube& cube, const LatticePoint& y, const Staircase& staircase) {
  std::int64_t near_sq = 0;
  std::int64_t far_sq = 0;
  for (int i = 0; i < cube.dim(); ++i) {
    const std::int64_t offset = std::abs(static_cast<std::int64_t>(y[i]) - cube.center[i]);
    const std::int64_t gap = std::max<std::int64_t>(0, offset - cube.radius);
    const std::int64_t reach = offset + cube.radius;
    near_sq += gap * gap;
    far_sq += reach * reach;
  }
  const std::int64_t k_near = staircase.plateau_index_sq(near_sq);
  const std::int64_t k_far = staircase.plateau_index_sq(far_sq);
  return k_near == k_far ? k_near : -1;
}

std::vector<ConstantScatterer> constant_scatterers(std::span<const LatticePoint> set, std::int64_t n_first,
                                                   std::int64_t n_last, const Staircase& staircase) {
  std::vector<ConstantScatterer> out;
  for (std::int64_t n = n_first; n <= n_last; ++n) {
    for (const auto& x : shell_sites(set, n, staircase)) {
      const std::int64_t k = staircase.plateau_index_sq(squared_distance(x, set.front()));
      bool constant = true;
      for (const auto& y : set) {
        if (staircase.plateau_index_sq(squared_distance(x, y)) != k) {
          constant = false;
          break;
        }
      }
      if (constant) out.push_back({x, k, staircase.plateau_value(k)});
    }
  }
  return out;
}

XiDecomposition xi_decompose(const MultiCube& cube, const DisorderConfig& config, const Staircase& staircase,
                             std::int64_t n_max) {
  XiDecomposition out;
  const int n_particles = cube.particles();
  const auto& window = config.window();
  const auto amps = config.amplitudes();

  std::int64_t reach_sq = -1;
  if (n_max > 0) {
    const std::int64_t r = staircase.plateau_radius(n_max + 1);
    reach_sq = r * r;
  }

  std::vector<LatticePoint> residual_sites;
  std::vector<double> residual_amps;
  for (std::size_t i = 0; i < window.size(); ++i) {
    const auto& y = window[i];
    bool constant = true;
    double contribution = 0.0;
    std::int64_t nearest_sq = -1;
    for (int j = 0; j < n_particles && constant; ++j) {
      const Cube c = cube.projection_cube(j);
      const std::int64_t k = constant_plateau_on_cube(c, y, staircase);
      if (k < 0) constant = false;
      else contribution += staircase.plateau_value(k);
      std::int64_t gap_sq = 0;
      for (int a = 0; a < c.dim(); ++a) {
        const std::int64_t g = std::max<std::int64_t>(0, std::abs(static_cast<std::int64_t>(y[a]) - c.center[a]) - c.radius);
        gap_sq += g * g;
      }
      nearest_sq = nearest_sq < 0 ? gap_sq : std::min(nearest_sq, gap_sq);
    }
    if (constant && reach_sq >= 0 && nearest_sq >= reach_sq) constant = false;
    if (constant) {
      out.constant_sites.push_back(y);
      out.constant_contribution.push_back(contribution);
      out.xi += amps[i] * contribution;
    } else {
      residual_sites.push_back(y);
      residual_amps.push_back(amps[i]);
    }
  }

  const auto proj = projection(cube);
  const auto full = cumulative_potential(proj, config, staircase);
  const auto rest_config = DisorderConfig::from_values(std::move(residual_sites), std::move(residual_amps));
  const auto rest = cumulative_potential(proj, rest_config, staircase);
  auto lookup = [&](const std::vector<double>& values, const LatticePoint& p) {
    auto it = std::lower_bound(proj.begin(), proj.end(), p);
    return values[static_cast<std::size_t>(it - proj.begin())];
  };

  const auto points = sites(cube);
  out.potential.reserve(points.size());
  out.residual.reserve(points.size());
  for (const auto& x : points) {
    double v = 0.0;
    double r = 0.0;
    for (int j = 0; j < n_particles; ++j) {
      v += lookup(full, x.particle[static_cast<std::size_t>(j)]);
      r += lookup(rest, x.particle[static_cast<std::size_t>(j)]);
    }
    out.potential.push_back(v);
    out.residual.push_back(r);
  }
  return out;
}

}  // namespace stairloc
