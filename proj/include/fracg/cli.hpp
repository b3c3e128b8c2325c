#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracg/young.hpp"

namespace fracg {

/// Everything a `run` scenario needs, parsed and validated up front.
/// `defaulted` lists the keys the config file left to their defaults, in the
/// "key = value" form they are echoed with; reports must never default
/// silently.
struct RunConfig {
  YoungFamily family = YoungFamily::Power;
  std::vector<double> exponents{3.0};
  double s = 0.5;
  std::string kernel = "power";

  int dim = 1;
  int grid_n = 256;
  double radius = 1.0;

  bool has_rhs = false;
  double rhs_value = 1.0;
  std::string field_path;  // import this field and skip the solve when set

  double tol = 1e-6;
  int max_iter = 20000;
  double tau0 = 0.0;
  std::string init = "zero";  // or "asym": off-center bump initial guess
  int threads = 1;

  uint64_t seed = 7;
  long samples = 20000;  // certification sample count for the young stage

  std::vector<std::string> audits{"mp", "symmetry"};
  double audit_tol = 1e-5;
  double amp_lambda = -0.3;
  double boundary_lambda0 = 0.0;
  int boundary_jmax = 6;
  std::vector<double> liouville_radii{0.5, 1.0};

  std::string out_dir = "out";

  std::vector<std::string> defaulted;
};

/// Flat key = value text with optional [section] headers (organizational
/// only; keys are globally unique). Unknown keys and sections are rejected;
/// every diagnostic carries the 1-based line number of the offending line.
RunConfig parse_config(const std::string& text);

/// young report -> solve (or import) -> audits, writing sol.field,
/// history.csv and report.json under config.out_dir. Returns 0 iff every
/// stage passes; the report names the first failing stage otherwise.
int run_scenario(const RunConfig& config);

/// Entry point for the command-line tool; returns the process exit code.
int cli_main(int argc, char** argv);

}  // namespace fracg
