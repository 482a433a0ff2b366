#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stairloc/disorder.hpp"
#include "stairloc/geometry.hpp"
#include "stairloc/msa.hpp"
#include "stairloc/potential.hpp"
#include "stairloc/staircase.hpp"

namespace stairloc::harness {

// Parsed experiment file. Sections and keys are listed in docs/config.md;
// unknown keys are rejected.
struct ExperimentSpec {
  std::string kind;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  int threads = 1;
  std::string out = "out";
  bool override_constraints = false;

  // [model]
  StaircaseParams staircase{};
  int particles = 1;
  double coupling = 1.0;
  InteractionParams interaction{};

  // [disorder]
  AmplitudeDistribution distribution = AmplitudeDistribution::bernoulli(0.5);
  std::string distribution_text = "bernoulli(0.5)";

  // [geometry]
  int radius = 3;
  double tau = 2.0;
  std::vector<LatticePoint> centers;   // one per particle
  std::vector<LatticePoint> centers2;  // second cube (evcomp)
  double cutoff = 0.0;                 // 0: smallest certified radius for tail_tol
  double tail_tol = 1e-8;
  double separation_factor = 8.0;

  // [grids]
  std::vector<double> t_grid;
  std::vector<double> eps_grid;
  std::vector<double> energy_grid;
  std::vector<double> lambda_grid;
  std::vector<double> v_grid;

  // [charfn]
  std::string shell_source = "lattice";
  double shell_c = 1.0;
  std::int64_t shell_first = 1;
  std::int64_t shell_last = -1;  // -1: unbounded
  std::int64_t max_shell = 1024;
  double window_decades = 1.0;
  double t_max = 0.0;
  std::size_t samples = 0;
  std::uint64_t budget = std::uint64_t{1} << 22;

  // [wegner]
  bool exact = false;

  // [schedule] and [msa]
  ScheduleParams schedule{};
  double msa_energy = 0.5;
  int stride = 0;
  std::size_t stability_trials = kDefaultStabilityTrials;
  int outside_shell = 0;
  int separation = 0;

  // [ils]
  std::vector<std::int64_t> ils_L0{3, 5, 7};
  double theta = 1.0;

  // [localize]
  std::size_t states = 10;
  int mass_radius = 25;
  int correlator_max = 20;
};

// Command-line values that override the file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<int> threads;
  std::optional<std::string> out;
  bool override_constraints = false;
};

// Throws Error(kConfig) for unreadable files, unknown keys and bad values.
ExperimentSpec load_spec(const std::string& path, const std::string& kind, const Overrides& overrides = {});
ExperimentSpec parse_spec(const std::string& text, const std::string& kind, const Overrides& overrides = {});

// Grid syntax: "a, b, c" | "linspace(a, b, n)" | "logspace(a, b, n)" (endpoints, not exponents).
std::vector<double> parse_grid(const std::string& text);
// "0,0; 40,0" -> points of the given dimension.
std::vector<LatticePoint> parse_points(const std::string& text, int dim);

// Cutoff actually used: spec.cutoff or the certified radius for tail_tol.
double effective_cutoff(const ExperimentSpec& spec);

struct ValidationItem {
  std::string name;
  bool ok = true;
  std::string detail;
};

// Checks shared by all experiments plus those of spec.kind. Throws Error with
// the matching kind (kConfig, kTooLarge, ...) on the first hard failure;
// soft schedule violations are returned when overridden.
std::vector<ValidationItem> validate(const ExperimentSpec& spec);

}  // namespace stairloc::harness
