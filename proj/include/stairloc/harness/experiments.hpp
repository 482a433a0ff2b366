#pragma once

#include "stairloc/harness/config.hpp"
#include "stairloc/harness/report.hpp"

namespace stairloc::harness {

// Each driver expects a validated spec and returns the report without writing it.
RunReport run_charfn(const ExperimentSpec& spec);
RunReport run_wegner(const ExperimentSpec& spec);
RunReport run_evcomp(const ExperimentSpec& spec);
RunReport run_ils(const ExperimentSpec& spec);
RunReport run_msa(const ExperimentSpec& spec);
RunReport run_localize(const ExperimentSpec& spec);
// Checks the spec under its declared kind; the report is written as "validate".
RunReport run_validate(const ExperimentSpec& spec);

// validate(), set the thread count, dispatch on spec.kind, time the run.
RunReport run_experiment(const ExperimentSpec& spec);

}  // namespace stairloc::harness
