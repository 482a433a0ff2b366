#include "stairloc/staircase.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stairloc/errors.hpp"

namespace stairloc {

namespace {

constexpr long double kLogMargin = 1e-12L;
constexpr long double kMaxRadius = 4.0e18L;

// c <= k^kappa, decided in log space with the margin tilted towards inclusion.
bool at_most_power(std::int64_t c, std::int64_t k, double kappa) {
  if (c <= 0) return true;
  const long double lhs = std::log(static_cast<long double>(c));
  const long double rhs = static_cast<long double>(kappa) * std::log(static_cast<long double>(k));
  return lhs <= rhs + kLogMargin;
}

}  // namespace

ExitCode exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEnumerationTooLarge:
    case ErrorKind::kTooLarge:
      return ExitCode::kBudgetExceeded;
    case ErrorKind::kResonantEnergy:
    case ErrorKind::kConvergence:
    case ErrorKind::kUncertainty:
      return ExitCode::kSolverFailure;
    default:
      return ExitCode::kConfigInvalid;
  }
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kEmptyBoundary: return "empty_boundary";
    case ErrorKind::kDegenerateCore: return "degenerate_core";
    case ErrorKind::kRange: return "range";
    case ErrorKind::kTruncation: return "truncation";
    case ErrorKind::kNotNonInteractive: return "not_non_interactive";
    case ErrorKind::kRangeViolation: return "range_violation";
    case ErrorKind::kEnumerationTooLarge: return "enumeration_too_large";
    case ErrorKind::kTooLarge: return "too_large";
    case ErrorKind::kResonantEnergy: return "resonant_energy";
    case ErrorKind::kConvergence: return "convergence";
    case ErrorKind::kUncertainty: return "uncertainty";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kConfig: return "config";
  }
  return "unknown";
}

void StaircaseParams::validate() const {
  if (!(kappa > 1.0)) throw Error(ErrorKind::kConfig, "staircase: kappa must exceed 1");
  if (dim < 1) throw Error(ErrorKind::kConfig, "staircase: dimension must be >= 1");
  if (!(decay > dim)) throw Error(ErrorKind::kConfig, "staircase: decay exponent A must exceed d");
}

std::int64_t floor_power(std::int64_t k, double kappa) {
  if (k < 1) throw Error(ErrorKind::kDomain, "floor_power: k must be >= 1");
  const long double estimate = std::pow(static_cast<long double>(k), static_cast<long double>(kappa));
  if (!(estimate < kMaxRadius)) {
    throw Error(ErrorKind::kRange, "floor_power: k^kappa overflows the integer range (k=" +
                                       std::to_string(k) + ")");
  }
  auto c = static_cast<std::int64_t>(std::floor(estimate));
  while (c > 1 && !at_most_power(c, k, kappa)) --c;
  while (at_most_power(c + 1, k, kappa)) ++c;
  return c;
}

Staircase::Staircase(StaircaseParams params, std::int64_t table_radius) : params_(params) {
  params_.validate();
  for (std::int64_t k = 1;; ++k) {
    const std::int64_t r = floor_power(k, params_.kappa);
    if (!radii_.empty() && r <= radii_.back()) {
      throw Error(ErrorKind::kRange, "staircase: plateau radii not strictly increasing at k=" +
                                         std::to_string(k));
    }
    radii_.push_back(r);
    radii_sq_.push_back(r * r);
    values_.push_back(std::pow(static_cast<double>(r), -params_.decay));
    if (r > table_radius) break;
  }
}

std::int64_t Staircase::plateau_radius(std::int64_t k) const {
  if (k < 1) throw Error(ErrorKind::kDomain, "plateau_radius: k must be >= 1");
  if (k <= static_cast<std::int64_t>(radii_.size())) return radii_[k - 1];
  return floor_power(k, params_.kappa);
}

double Staircase::plateau_value(std::int64_t k) const {
  if (k <= 0) return 0.0;
  if (k <= static_cast<std::int64_t>(values_.size())) return values_[k - 1];
  return std::pow(static_cast<double>(plateau_radius(k)), -params_.decay);
}

std::int64_t Staircase::plateau_index(double r) const {
  if (!(r >= 1.0)) return 0;
  if (r < static_cast<double>(radii_.back())) {
    auto it = std::upper_bound(radii_.begin(), radii_.end(), r,
                               [](double x, std::int64_t rk) { return x < static_cast<double>(rk); });
    return it - radii_.begin();
  }
  auto k = static_cast<std::int64_t>(std::floor(std::pow(r, 1.0 / params_.kappa)));
  k = std::max<std::int64_t>(k, 1);
  while (k > 1 && static_cast<double>(plateau_radius(k)) > r) --k;
  while (static_cast<double>(plateau_radius(k + 1)) <= r) ++k;
  return k;
}

std::int64_t Staircase::plateau_index_sq(std::int64_t squared_distance) const {
  if (squared_distance < 1) return 0;
  if (squared_distance < radii_sq_.back()) {
    auto it = std::upper_bound(radii_sq_.begin(), radii_sq_.end(), squared_distance);
    return it - radii_sq_.begin();
  }
  std::int64_t k = plateau_index(std::sqrt(static_cast<double>(squared_distance)));
  auto sq = [this](std::int64_t j) {
    const std::int64_t r = plateau_radius(j);
    return r * r;
  };
  while (k > 1 && sq(k) > squared_distance) --k;
  while (sq(k + 1) <= squared_distance) ++k;
  return k;
}

Staircase Staircase::powered(double power) const {
  StaircaseParams p = params_;
  p.decay *= power;
  return Staircase(p, radii_.back());
}

}  // namespace stairloc
