#pragma once

#include <optional>
#include <string>

#include "faultfem/adapt.hpp"

namespace faultfem {

struct RunOptions {
  std::string problem;  // manufactured | linear-fault | fault-flow
  ElementFamily family = ElementFamily::BDM1;
  RefinementMode mode = RefinementMode::Adaptive;
  double theta = 0.5;
  std::optional<double> alpha;
  int n = 8;
  int iters = 10;
  int max_dofs = 200000;
  std::string out;  // results path; empty = study.csv / study.json
  bool json = false;
  bool dump_mesh = false;
  bool dump_matrix = false;
  bool dump_estimator = false;
};

/// Throws std::invalid_argument naming the offending flag.
void validate(const RunOptions& options);

/// Resolve the problem id and alpha override into a definition; throws
/// std::invalid_argument on an unknown id or a forbidden override.
ProblemDefinition resolve_problem(const RunOptions& options);

/// Run the configured study and write results (and requested dumps).
/// Returns the process exit code.
int run(const RunOptions& options);

/// Full command-line entry point (parse, validate, run). Diagnostics go to
/// stderr; returns nonzero on any failure.
int run_cli(int argc, const char* const* argv);

}  // namespace faultfem
