#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <boost/property_tree/ptree.hpp>

#include "stairloc/errors.hpp"
#include "stairloc/harness/config.hpp"
#include "stairloc/harness/experiments.hpp"
#include "stairloc/harness/report.hpp"

using namespace stairloc;

int main(int argc, char** argv) {
  CLI::App app{"Staircase-interaction localization experiments"};
  app.require_subcommand(1);

  std::string config;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  int threads = 0;
  std::string out;
  bool override_constraints = false;

  for (const char* name : {"charfn", "wegner", "evcomp", "ils", "msa", "localize", "validate"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "experiment file (INI)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--trials", trials, "trial count");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "output directory");
    sub->add_flag("--override-constraints", override_constraints, "run even if the schedule constraints fail");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kConfigInvalid);
  }

  const auto* sub = app.get_subcommands().front();
  const std::string kind = sub->get_name();
  harness::Overrides ov;
  if (sub->count("--seed")) ov.seed = seed;
  if (sub->count("--trials")) ov.trials = trials;
  if (sub->count("--threads")) ov.threads = threads;
  if (sub->count("--out")) ov.out = out;
  ov.override_constraints = override_constraints;

  try {
    const bool only_validate = kind == "validate";
    const auto spec = harness::load_spec(config, only_validate ? "" : kind, ov);
    const auto report = only_validate ? harness::run_validate(spec) : harness::run_experiment(spec);
    harness::write_report(spec, report);
    std::cout << kind << ": wrote " << spec.out << "/" << report.kind << ".csv and " << report.kind
              << "_summary.json\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const boost::property_tree::ptree_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kConfigInvalid);
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return static_cast<int>(ExitCode::kBudgetExceeded);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kSolverFailure);
  }
}
