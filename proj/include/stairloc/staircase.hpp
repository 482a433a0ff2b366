#pragma once

#include <cstdint>
#include <vector>

namespace stairloc {

// Interaction law: plateaus r_k = floor(k^kappa), value r_k^{-decay} on [r_k, r_{k+1}).
struct StaircaseParams {
  double kappa = 2.0;
  double decay = 3.0;  // A
  int dim = 1;         // d

  // Throws Error(kConfig) unless kappa > 1 and decay > dim >= 1.
  void validate() const;
};

// floor(k^kappa) with an integer-boundary guard: the floating-point estimate is
// corrected by comparing log(c) and log(c + 1) against kappa * log(k) with a
// 1e-12 margin, so exact integer powers land on the right plateau.
std::int64_t floor_power(std::int64_t k, double kappa);

// Precomputed plateau table with exact lookups by (squared) distance.
class Staircase {
 public:
  explicit Staircase(StaircaseParams params, std::int64_t table_radius = std::int64_t{1} << 16);

  const StaircaseParams& params() const { return params_; }
  int dim() const { return params_.dim; }

  // r_k for k >= 1.
  std::int64_t plateau_radius(std::int64_t k) const;
  // r_k^{-A}; zero for k == 0.
  double plateau_value(std::int64_t k) const;

  // Largest k with r_k <= r, or 0 when r < 1.
  std::int64_t plateau_index(double r) const;
  // Same, for an integer squared distance (exact).
  std::int64_t plateau_index_sq(std::int64_t squared_distance) const;

  double value(double r) const { return plateau_value(plateau_index(r)); }
  double value_sq(std::int64_t squared_distance) const {
    return plateau_value(plateau_index_sq(squared_distance));
  }

  // The same staircase with the decay exponent multiplied by `power` (u^power).
  Staircase powered(double power) const;

 private:
  StaircaseParams params_;
  std::vector<std::int64_t> radii_;     // radii_[k-1] = r_k
  std::vector<std::int64_t> radii_sq_;  // r_k^2
  std::vector<double> values_;          // r_k^{-A}
};

}  // namespace stairloc
