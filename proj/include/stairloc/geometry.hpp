#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "stairloc/staircase.hpp"

namespace stairloc {

inline constexpr int kMaxDim = 3;

// A point of Z^d, 1 <= d <= kMaxDim.
class LatticePoint {
 public:
  LatticePoint() = default;
  LatticePoint(std::initializer_list<int> coords);
  static LatticePoint origin(int dim);

  int dim() const { return dim_; }
  int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  std::span<const int> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  LatticePoint operator+(const LatticePoint& o) const;
  LatticePoint operator-(const LatticePoint& o) const;

  // Lexicographic in the coordinates (unused slots are zero).
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

 private:
  std::array<int, kMaxDim> c_{};
  int dim_ = 0;
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const;
};

std::int64_t squared_distance(const LatticePoint& a, const LatticePoint& b);
int sup_distance(const LatticePoint& a, const LatticePoint& b);

// Squared Euclidean distance from x to the nearest point of a finite set.
std::int64_t squared_distance_to_set(const LatticePoint& x, std::span<const LatticePoint> set);

// Sup-norm ball {x : |x - center|_inf <= radius}.
struct Cube {
  LatticePoint center;
  int radius = 0;

  int dim() const { return center.dim(); }
  std::size_t size() const;
  bool contains(const LatticePoint& x) const;
};

// A configuration of N in {1, 2} particles.
struct MultiPoint {
  std::array<LatticePoint, 2> particle{};
  int count = 1;

  friend auto operator<=>(const MultiPoint&, const MultiPoint&) = default;
};

// Product of N sup-norm cubes of a common radius.
class MultiCube {
 public:
  static MultiCube one(const Cube& cube);
  static MultiCube two(const LatticePoint& u1, const LatticePoint& u2, int radius);

  int particles() const { return particles_; }
  int radius() const { return radius_; }
  int dim() const { return centers_[0].dim(); }
  const LatticePoint& center(int j) const { return centers_[static_cast<std::size_t>(j)]; }
  Cube projection_cube(int j) const { return Cube{center(j), radius_}; }
  MultiCube with_radius(int radius) const;

  // (2L+1)^{N d}
  std::size_t size() const;
  bool contains(const MultiPoint& x) const;

 private:
  std::array<LatticePoint, 2> centers_{};
  int radius_ = 0;
  int particles_ = 1;
};

// Sites in lexicographic order.
std::vector<LatticePoint> sites(const Cube& cube);
std::vector<MultiPoint> sites(const MultiCube& cube);

// Union of the projection cubes, sorted and deduplicated.
std::vector<LatticePoint> projection(const MultiCube& cube);

// Sites with a nearest neighbour outside the cube. Throws kEmptyBoundary when L = 0.
std::vector<LatticePoint> inner_boundary(const Cube& cube);
std::vector<MultiPoint> inner_boundary(const MultiCube& cube);

// Concentric cube of radius floor(L/3). Throws kDegenerateCore when L < 3.
Cube core(const Cube& cube);
MultiCube core(const MultiCube& cube);

// |u1 - u2|_inf > 4L. Requires a 2-particle cube.
bool is_non_interactive(const MultiCube& cube);

// {x : dist_2(x, S) in [r_n, r_{n+1})}, sorted.
std::vector<LatticePoint> shell_sites(std::span<const LatticePoint> set, std::int64_t n,
                                      const Staircase& staircase);

// Calls fn(point) for every lattice point of the sup-norm box [lo, hi]^d, lexicographically.
void for_each_in_box(const LatticePoint& lo, const LatticePoint& hi,
                     const std::function<void(const LatticePoint&)>& fn);

}  // namespace stairloc
