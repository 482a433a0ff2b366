#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "stairloc/charfn.hpp"
#include "stairloc/disorder.hpp"
#include "stairloc/operator.hpp"
#include "stairloc/parallel.hpp"
#include "stairloc/potential.hpp"
#include "stairloc/spectral.hpp"

using namespace stairloc;
using Clock = std::chrono::steady_clock;

template <class Fn>
double seconds(Fn&& fn, int reps = 3) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return best;
}

template <class T>
bool same(const std::vector<T>& a, const std::vector<T>& b) {
  return a == b;
}

void row(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  identical %s\n", name, serial, parallel,
              serial / parallel, identical ? "yes" : "NO");
}

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : 4;
  set_thread_count(threads);
  std::printf("threads: %d\n", thread_count());
  const auto dist = AmplitudeDistribution::bernoulli(0.5);

  {
    const Staircase stair({2.0, 3.0, 2});
    const std::vector<LatticePoint> c{LatticePoint::origin(2)};
    const auto window = window_around(c, 120);
    const auto cfg = DisorderConfig::sample(window, dist, 7);
    const auto pts = window_around(c, 10);
    std::vector<double> s, p;
    const double ts = seconds([&] { s = cumulative_potential_serial(pts, cfg, stair); });
    const double tp = seconds([&] { p = cumulative_potential(pts, cfg, stair); });
    row("cumulative_potential", ts, tp, same(s, p));
  }
  {
    const Staircase stair({2.0, 3.0, 2});
    std::vector<std::int64_t> s, p;
    const double ts = seconds([&] { s = origin_shell_counts_serial(stair, 1, 400); });
    const double tp = seconds([&] { p = origin_shell_counts(stair, 1, 400); });
    row("origin_shell_counts", ts, tp, same(s, p));
  }
  {
    const Staircase stair({2.0, 3.0, 1});
    const auto sum = ShellSum::lattice(stair, {LatticePoint::origin(1)}, 1, kUnbounded, 1024);
    std::vector<double> t;
    for (int i = 0; i < 20000; ++i) t.push_back(std::pow(10.0, -1.0 + 5.0 * i / 19999.0));
    std::vector<double> s, p;
    const double ts = seconds([&] { s = log_abs_charfn_serial(sum, dist, t); });
    const double tp = seconds([&] { p = log_abs_charfn(sum, dist, t); });
    row("log_abs_charfn grid", ts, tp, same(s, p));
  }
  {
    const Staircase stair({2.0, 3.0, 1});
    const std::vector<LatticePoint> c{LatticePoint::origin(1)};
    const auto window = window_around(c, 400);
    const auto cube = MultiCube::one(Cube{c[0], 40});
    auto trial = [&](std::size_t t) {
      const auto cfg = DisorderConfig::sample(window, dist, derive_seed(11, t));
      return full_spectrum(assemble(cube, cfg, stair, {}, 1.0), false).eigenvalues.front();
    };
    std::vector<double> s, p;
    const double ts = seconds([&] { s = serial_map<double>(64, trial); }, 1);
    const double tp = seconds([&] { p = parallel_map<double>(64, trial); }, 1);
    row("trial map (64 cubes)", ts, tp, same(s, p));
  }
  return 0;
}
