#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stairloc {

// Process exit codes used by the CLI.
enum class ExitCode : int {
  kOk = 0,
  kConfigInvalid = 2,
  kBudgetExceeded = 3,
  kSolverFailure = 4,
};

enum class ErrorKind {
  kDomain,
  kEmptyBoundary,
  kDegenerateCore,
  kRange,
  kTruncation,
  kNotNonInteractive,
  kRangeViolation,
  kEnumerationTooLarge,
  kTooLarge,
  kResonantEnergy,
  kConvergence,
  kUncertainty,
  kUnsupported,
  kConfig,
};

ExitCode exit_code_for(ErrorKind kind);
const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  ExitCode exit_code() const { return exit_code_for(kind_); }

 private:
  ErrorKind kind_;
};

// Window too small for the requested truncation tolerance.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double required_radius)
      : Error(ErrorKind::kTruncation, what), required_radius_(required_radius) {}
  double required_radius() const { return required_radius_; }

 private:
  double required_radius_;
};

// The energy sits on (or numerically at) the spectrum; the cube is resonant.
class ResonantEnergyError : public Error {
 public:
  ResonantEnergyError(const std::string& what, double distance)
      : Error(ErrorKind::kResonantEnergy, what), distance_(distance) {}
  double distance() const { return distance_; }

 private:
  double distance_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error(ErrorKind::kConvergence, what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

}  // namespace stairloc
