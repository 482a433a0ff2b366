#include "stairloc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "stairloc/errors.hpp"

namespace stairloc {

LatticePoint::LatticePoint(std::initializer_list<int> coords) {
  if (coords.size() < 1 || coords.size() > static_cast<std::size_t>(kMaxDim)) {
    throw Error(ErrorKind::kDomain, "LatticePoint: dimension must be in [1, 3]");
  }
  std::copy(coords.begin(), coords.end(), c_.begin());
  dim_ = static_cast<int>(coords.size());
}

LatticePoint LatticePoint::origin(int dim) {
  if (dim < 1 || dim > kMaxDim) throw Error(ErrorKind::kDomain, "LatticePoint: dimension must be in [1, 3]");
  LatticePoint p;
  p.dim_ = dim;
  return p;
}

LatticePoint LatticePoint::operator+(const LatticePoint& o) const {
  LatticePoint r = *this;
  for (int i = 0; i < dim_; ++i) r[i] += o[i];
  return r;
}

LatticePoint LatticePoint::operator-(const LatticePoint& o) const {
  LatticePoint r = *this;
  for (int i = 0; i < dim_; ++i) r[i] -= o[i];
  return r;
}

std::size_t LatticePointHash::operator()(const LatticePoint& p) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(p.dim());
  for (int c : p.coords()) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::int64_t squared_distance(const LatticePoint& a, const LatticePoint& b) {
  std::int64_t s = 0;
  for (int i = 0; i < a.dim(); ++i) {
    const std::int64_t diff = static_cast<std::int64_t>(a[i]) - b[i];
    s += diff * diff;
  }
  return s;
}

int sup_distance(const LatticePoint& a, const LatticePoint& b) {
  int m = 0;
  for (int i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::int64_t squared_distance_to_set(const LatticePoint& x, std::span<const LatticePoint> set) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& y : set) best = std::min(best, squared_distance(x, y));
  return best;
}

std::size_t Cube::size() const {
  std::size_t n = 1;
  for (int i = 0; i < dim(); ++i) n *= static_cast<std::size_t>(2 * radius + 1);
  return n;
}

bool Cube::contains(const LatticePoint& x) const { return sup_distance(x, center) <= radius; }

MultiCube MultiCube::one(const Cube& cube) {
  if (cube.radius < 0) throw Error(ErrorKind::kDomain, "MultiCube: negative radius");
  MultiCube m;
  m.centers_[0] = cube.center;
  m.centers_[1] = cube.center;
  m.radius_ = cube.radius;
  m.particles_ = 1;
  return m;
}

MultiCube MultiCube::two(const LatticePoint& u1, const LatticePoint& u2, int radius) {
  if (radius < 0) throw Error(ErrorKind::kDomain, "MultiCube: negative radius");
  if (u1.dim() != u2.dim()) throw Error(ErrorKind::kDomain, "MultiCube: centers differ in dimension");
  MultiCube m;
  m.centers_ = {u1, u2};
  m.radius_ = radius;
  m.particles_ = 2;
  return m;
}

MultiCube MultiCube::with_radius(int radius) const {
  MultiCube m = *this;
  m.radius_ = radius;
  return m;
}

std::size_t MultiCube::size() const {
  const std::size_t one = projection_cube(0).size();
  return particles_ == 1 ? one : one * one;
}

bool MultiCube::contains(const MultiPoint& x) const {
  if (x.count != particles_) return false;
  for (int j = 0; j < particles_; ++j) {
    if (!projection_cube(j).contains(x.particle[static_cast<std::size_t>(j)])) return false;
  }
  return true;
}

void for_each_in_box(const LatticePoint& lo, const LatticePoint& hi,
                     const std::function<void(const LatticePoint&)>& fn) {
  const int d = lo.dim();
  for (int i = 0; i < d; ++i) {
    if (hi[i] < lo[i]) return;
  }
  LatticePoint p = lo;
  while (true) {
    fn(p);
    int i = d - 1;
    while (i >= 0 && p[i] == hi[i]) {
      p[i] = lo[i];
      --i;
    }
    if (i < 0) return;
    ++p[i];
  }
}

namespace {

LatticePoint offset(const LatticePoint& c, int delta) {
  LatticePoint p = c;
  for (int i = 0; i < c.dim(); ++i) p[i] += delta;
  return p;
}

bool on_boundary(const Cube& cube, const LatticePoint& x) { return sup_distance(x, cube.center) == cube.radius; }

}  // namespace

std::vector<LatticePoint> sites(const Cube& cube) {
  std::vector<LatticePoint> out;
  out.reserve(cube.size());
  for_each_in_box(offset(cube.center, -cube.radius), offset(cube.center, cube.radius),
                  [&](const LatticePoint& p) { out.push_back(p); });
  return out;
}

std::vector<MultiPoint> sites(const MultiCube& cube) {
  const auto first = sites(cube.projection_cube(0));
  std::vector<MultiPoint> out;
  if (cube.particles() == 1) {
    out.reserve(first.size());
    for (const auto& p : first) out.push_back(MultiPoint{{p, LatticePoint{}}, 1});
    return out;
  }
  const auto second = sites(cube.projection_cube(1));
  out.reserve(first.size() * second.size());
  for (const auto& p : first) {
    for (const auto& q : second) out.push_back(MultiPoint{{p, q}, 2});
  }
  return out;
}

std::vector<LatticePoint> projection(const MultiCube& cube) {
  auto out = sites(cube.projection_cube(0));
  if (cube.particles() == 2) {
    auto more = sites(cube.projection_cube(1));
    out.insert(out.end(), more.begin(), more.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return out;
}

std::vector<LatticePoint> inner_boundary(const Cube& cube) {
  if (cube.radius < 1) throw Error(ErrorKind::kEmptyBoundary, "inner_boundary: cube radius must be >= 1");
  std::vector<LatticePoint> out;
  for (const auto& p : sites(cube)) {
    if (on_boundary(cube, p)) out.push_back(p);
  }
  return out;
}

std::vector<MultiPoint> inner_boundary(const MultiCube& cube) {
  if (cube.radius() < 1) throw Error(ErrorKind::kEmptyBoundary, "inner_boundary: cube radius must be >= 1");
  std::vector<MultiPoint> out;
  for (const auto& x : sites(cube)) {
    for (int j = 0; j < cube.particles(); ++j) {
      if (on_boundary(cube.projection_cube(j), x.particle[static_cast<std::size_t>(j)])) {
        out.push_back(x);
        break;
      }
    }
  }
  return out;
}

Cube core(const Cube& cube) {
  if (cube.radius < 3) throw Error(ErrorKind::kDegenerateCore, "core: cube radius must be >= 3");
  return Cube{cube.center, cube.radius / 3};
}

MultiCube core(const MultiCube& cube) {
  if (cube.radius() < 3) throw Error(ErrorKind::kDegenerateCore, "core: cube radius must be >= 3");
  return cube.with_radius(cube.radius() / 3);
}

bool is_non_interactive(const MultiCube& cube) {
  if (cube.particles() != 2) throw Error(ErrorKind::kDomain, "is_non_interactive: requires a 2-particle cube");
  return sup_distance(cube.center(0), cube.center(1)) > 4 * cube.radius();
}

std::vector<LatticePoint> shell_sites(std::span<const LatticePoint> set, std::int64_t n,
                                      const Staircase& staircase) {
  if (set.empty()) throw Error(ErrorKind::kDomain, "shell_sites: empty set");
  if (n < 1) throw Error(ErrorKind::kDomain, "shell_sites: shell index must be >= 1");
  const std::int64_t inner = staircase.plateau_radius(n);
  const std::int64_t outer = staircase.plateau_radius(n + 1);
  const std::int64_t inner_sq = inner * inner;
  const std::int64_t outer_sq = outer * outer;

  const int d = set.front().dim();
  LatticePoint lo = set.front();
  LatticePoint hi = set.front();
  for (const auto& y : set) {
    for (int i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], y[i]);
      hi[i] = std::max(hi[i], y[i]);
    }
  }
  const int reach = static_cast<int>(outer);
  for (int i = 0; i < d; ++i) {
    lo[i] -= reach;
    hi[i] += reach;
  }
  std::vector<LatticePoint> out;
  for_each_in_box(lo, hi, [&](const LatticePoint& x) {
    const std::int64_t s = squared_distance_to_set(x, set);
    if (s >= inner_sq && s < outer_sq) out.push_back(x);
  });
  return out;
}

}  // namespace stairloc
