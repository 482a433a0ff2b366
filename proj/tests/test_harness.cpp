#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "stairloc/errors.hpp"
#include "stairloc/harness/config.hpp"
#include "stairloc/harness/experiments.hpp"
#include "stairloc/harness/report.hpp"

using namespace stairloc;
using namespace stairloc::harness;
namespace fs = std::filesystem;

namespace {

const char* kIls = R"(
[experiment]
kind = ils
seed = 3
trials = 40
[model]
dim = 1
coupling = 0.1
[ils]
L0 = 3, 4
theta = 1
)";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ExitCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.exit_code();
  }
  return ExitCode::kOk;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("grid syntax") {
  CHECK(parse_grid("1, 2.5, 4") == std::vector<double>{1.0, 2.5, 4.0});
  const auto lin = parse_grid("linspace(0, 1, 5)");
  REQUIRE(lin.size() == 5);
  CHECK(lin[1] == 0.25);
  CHECK(lin[4] == 1.0);
  const auto lg = parse_grid("logspace(1e-3, 10, 5)");
  REQUIRE(lg.size() == 5);
  CHECK(lg.front() == doctest::Approx(1e-3));
  CHECK(lg[2] == doctest::Approx(0.1));
  CHECK(lg.back() == doctest::Approx(10.0));
  CHECK_THROWS_AS(parse_grid("logspace(0, 1, 3)"), Error);
  CHECK_THROWS_AS(parse_grid("1, x"), Error);
  const auto pts = parse_points("0,0; 40,-2", 2);
  REQUIRE(pts.size() == 2);
  CHECK(pts[1] == LatticePoint{40, -2});
  CHECK_THROWS_AS(parse_points("1,2,3", 2), Error);
}

TEST_CASE("strict schema") {
  CHECK_NOTHROW(parse_spec(kIls, "ils"));
  CHECK(code_of([] { parse_spec(std::string(kIls) + "bogus = 1\n", "ils"); }) == ExitCode::kConfigInvalid);
  CHECK(code_of([] { parse_spec(std::string(kIls) + "[nowhere]\nx = 1\n", "ils"); }) == ExitCode::kConfigInvalid);
  CHECK(code_of([] { parse_spec(kIls, "wegner"); }) == ExitCode::kConfigInvalid);
  CHECK(code_of([] { validate(parse_spec("[model]\ndecay = 0.5\n", "ils")); }) == ExitCode::kConfigInvalid);
  CHECK(code_of([] { load_spec("/nonexistent/x.ini", "ils"); }) == ExitCode::kConfigInvalid);
  const auto s = parse_spec(kIls, "ils");
  CHECK(s.seed == 3);
  CHECK(s.ils_L0 == std::vector<std::int64_t>{3, 4});
  CHECK(s.staircase.decay == 3.0);
  Overrides o;
  o.seed = 9;
  o.trials = 7;
  o.threads = 2;
  const auto t = parse_spec(kIls, "ils", o);
  CHECK(t.seed == 9);
  CHECK(t.trials == 7);
  CHECK(t.threads == 2);
  CHECK(parse_spec(kIls, "").kind == "ils");
}

TEST_CASE("validation codes") {
  auto s = parse_spec(R"(
[experiment]
kind = wegner
[geometry]
radius = 2
tau = 3
tail_tol = 1e-30
[grids]
eps = 0.1
energy = 3
)",
                      "wegner");
  CHECK(code_of([&] { validate(s); }) == ExitCode::kConfigInvalid);
  auto big = parse_spec(R"(
[experiment]
kind = evcomp
[model]
dim = 2
decay = 3
[geometry]
radius = 2
tail_tol = 1e-4
centers = 0,0
centers2 = 900,0
[grids]
eps = 0.1
)",
                        "evcomp");
  CHECK(code_of([&] { validate(big); }) == ExitCode::kBudgetExceeded);
  big.tail_tol = 1e-2;
  CHECK(code_of([&] { validate(big); }) == ExitCode::kOk);
  big.centers2 = {LatticePoint{10, 0}};
  CHECK(code_of([&] { validate(big); }) == ExitCode::kConfigInvalid);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorKind::kConfig) == ExitCode::kConfigInvalid);
  CHECK(exit_code_for(ErrorKind::kTruncation) == ExitCode::kConfigInvalid);
  CHECK(exit_code_for(ErrorKind::kTooLarge) == ExitCode::kBudgetExceeded);
  CHECK(exit_code_for(ErrorKind::kEnumerationTooLarge) == ExitCode::kBudgetExceeded);
  CHECK(exit_code_for(ErrorKind::kConvergence) == ExitCode::kSolverFailure);
  CHECK(exit_code_for(ErrorKind::kResonantEnergy) == ExitCode::kSolverFailure);
  CHECK(exit_code_for(ErrorKind::kUncertainty) == ExitCode::kSolverFailure);
}

TEST_CASE("csv and numbers") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CsvTable t({"a", "b", "c"});
  t.add({1.5, std::int64_t{-2}, std::string("x,y")});
  CHECK_THROWS_AS(t.add({1.0}), Error);
  CHECK(t.str() == "a,b,c\n1.5,-2,\"x,y\"\n");
}

TEST_CASE("atomic write") {
  const auto dir = fs::temp_directory_path() / "stairloc_harness_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto path = (dir / "f.txt").string();
  write_atomic(path, "one");
  write_atomic(path, "two");
  CHECK(slurp(path) == "two");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  fs::remove_all(dir);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  const auto dir = fs::temp_directory_path() / "stairloc_repro_test";
  fs::remove_all(dir);
  std::vector<std::string> csv, summary;
  for (int threads : {1, 3, 1}) {
    Overrides o;
    o.threads = threads;
    o.out = (dir / std::to_string(csv.size())).string();
    const auto spec = parse_spec(kIls, "ils", o);
    const auto report = run_experiment(spec);
    write_report(spec, report);
    csv.push_back(slurp(fs::path(spec.out) / "ils.csv"));
    auto j = Json::parse(slurp(fs::path(spec.out) / "ils_summary.json"));
    j["spec"].erase("threads");
    j["spec"].erase("out");
    summary.push_back(j.dump());
    CHECK(fs::exists(fs::path(spec.out) / "ils_timing.json"));
  }
  CHECK(csv[0] == csv[1]);
  CHECK(csv[0] == csv[2]);
  CHECK(summary[0] == summary[1]);
  CHECK(summary[0] == summary[2]);
  fs::remove_all(dir);
}

}
