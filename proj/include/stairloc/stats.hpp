#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace stairloc {

// Proportion with a Wilson score interval (z = 1.96 for 95%).
struct BinomialEstimate {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double p = 0.0;
  double lo = 0.0;
  double hi = 1.0;
};

BinomialEstimate wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96);

// True when the two intervals do not overlap.
bool separated(const BinomialEstimate& a, const BinomialEstimate& b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares y = slope * x + intercept. Throws kDomain with fewer
// than two distinct x.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace stairloc
