#pragma once

// Command-line front end: check | solve | shoot | kernel | roots.
//
// Exit codes: 0 ok, 1 numerical failure, 2 usage, 3 admissibility.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "twave/classify.hpp"
#include "twave/errors.hpp"
#include "twave/integrator.hpp"

namespace twave::cli {

enum class Mode { Check, Solve, Shoot, Kernel, Roots };

const char* to_string(Mode m);

enum ExitCode : int { kOk = 0, kNumericalFailure = 1, kUsage = 2, kAdmissibility = 3 };

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& msg, int code = kUsage) : Error(msg), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

struct RunSpec {
  Mode mode = Mode::Check;
  double alpha = 0.9;
  double phi_minus = 1.0;
  double phi_plus = -0.6;
  IntegrateOptions integrate{};
  double stop_tol = 1e-12;
  double tail_tol = -1.0;  // <= 0: 5% of |phi_- - phi_+|
  int jobs = 1;
  std::optional<double> tau;
  double a = 1.0;
  double b = 1.0;
  double eta_max = 10.0;
  int points = 100;
  std::string out;               // output file, empty for none
  std::string trajectories_dir;  // shoot: per-iteration trajectory CSVs
  std::vector<std::string> warnings;
};

/// Parses argv (including the program name). Reads `--config FILE` key=value
/// lines first so that explicit flags override them. Throws UsageError (code
/// 0 for --help) and, in shoot mode, AdmissibilityError.
RunSpec parse_args(const std::vector<std::string>& argv);

/// Executes a parsed spec, printing a one-line JSON summary to `out` and
/// diagnostics to `err`. Returns the exit code.
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// parse_args + run with every error mapped to its exit code.
int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace twave::cli
