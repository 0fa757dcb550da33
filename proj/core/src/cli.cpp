#include "faultfem/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "faultfem/study_io.hpp"
#include "faultfem/system.hpp"

namespace faultfem {

namespace {

std::string family_name(ElementFamily f) { return f == ElementFamily::RT1 ? "rt1" : "bdm1"; }
std::string mode_name(RefinementMode m) {
  return m == RefinementMode::Uniform ? "uniform" : "adaptive";
}

std::string dump_path(const std::string& out, const char* kind, int iter) {
  std::string stem = out;
  const auto dotpos = stem.rfind('.');
  const auto slashpos = stem.rfind('/');
  if (dotpos != std::string::npos && (slashpos == std::string::npos || dotpos > slashpos))
    stem.resize(dotpos);
  char suffix[32];
  std::snprintf(suffix, sizeof suffix, "_%s_%04d.txt", kind, iter);
  return stem + suffix;
}

void write_estimator_dump(std::ostream& os, const EstimatorReport& report) {
  for (std::size_t c = 0; c < report.eta_cell.size(); ++c)
    os << "cell " << c << ' ' << format_double(report.eta_cell[c]) << ' '
       << format_double(report.osc_cell[c]) << '\n';
  for (std::size_t e = 0; e < report.eta_edge.size(); ++e)
    os << "edge " << e << ' ' << format_double(report.eta_edge[e]) << '\n';
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  return os;
}

}  // namespace

void validate(const RunOptions& options) {
  if (options.problem != "manufactured" && options.problem != "linear-fault" &&
      options.problem != "fault-flow")
    throw std::invalid_argument(
        "--problem must be one of manufactured, linear-fault, fault-flow; got '" +
        options.problem + "'");
  if (!(options.theta > 0.0) || options.theta > 1.0)
    throw std::invalid_argument("--theta must be in (0, 1], got " +
                                std::to_string(options.theta));
  if (options.n <= 0 || options.n % 4 != 0)
    throw std::invalid_argument("--n must be a positive multiple of 4, got " +
                                std::to_string(options.n));
  if (options.iters < 1)
    throw std::invalid_argument("--iters must be at least 1, got " +
                                std::to_string(options.iters));
  if (options.max_dofs < 1)
    throw std::invalid_argument("--max-dofs must be positive, got " +
                                std::to_string(options.max_dofs));
  if (options.alpha && !(*options.alpha > 0.0))
    throw std::invalid_argument("--alpha must be positive, got " +
                                std::to_string(*options.alpha));
  if (options.alpha && options.problem == "manufactured")
    throw std::invalid_argument(
        "--alpha cannot be overridden for the manufactured problem; its value 4/(3*pi) is "
        "forced by the interface condition");
}

ProblemDefinition resolve_problem(const RunOptions& options) {
  validate(options);
  if (options.problem == "manufactured") return manufactured();
  if (options.problem == "linear-fault") return linear_fault(options.alpha.value_or(1.0));
  return fault_flow(options.alpha.value_or(10.0));
}

int run(const RunOptions& options) {
  const ProblemDefinition problem = resolve_problem(options);

  AdaptConfig config;
  config.mode = options.mode;
  config.theta = options.theta;
  config.max_iterations = options.iters;
  config.max_dofs = options.max_dofs;
  config.family = options.family;
  config.initial_n = options.n;

  const std::string out_path =
      options.out.empty() ? (options.json ? "study.json" : "study.csv") : options.out;

  StudyObserver observer;
  if (options.dump_mesh || options.dump_matrix || options.dump_estimator) {
    observer = [&](int iter, const Mesh& mesh, const LinearSystem& system,
                   const EstimatorReport& report) {
      if (options.dump_mesh) {
        auto os = open_or_throw(dump_path(out_path, "mesh", iter));
        write_mesh(os, mesh);
      }
      if (options.dump_matrix) {
        auto os = open_or_throw(dump_path(out_path, "matrix", iter));
        write_matrix_coordinate(os, system);
      }
      if (options.dump_estimator) {
        auto os = open_or_throw(dump_path(out_path, "estimator", iter));
        write_estimator_dump(os, report);
      }
    };
  }

  StudyOutput output;
  output.config = {
      {"problem", options.problem},
      {"family", family_name(options.family)},
      {"mode", mode_name(options.mode)},
      {"theta", format_double(options.theta)},
      {"alpha", format_double(problem.data.alpha)},
      {"kappa", format_double(problem.data.kappa)},
      {"n", std::to_string(options.n)},
      {"iters", std::to_string(options.iters)},
      {"max_dofs", std::to_string(options.max_dofs)},
  };
  output.records = run_study(problem, config, observer);

  for (const StudyRecord& r : output.records) {
    std::cout << "iter " << r.iteration << ": cells=" << r.n_cells << " dofs=" << r.n_dofs
              << " eta=" << format_double(r.eta_total);
    if (r.flux_error) std::cout << " flux_err=" << format_double(*r.flux_error);
    std::cout << '\n';
  }

  auto os = open_or_throw(out_path);
  if (options.json)
    write_study_json(os, output);
  else
    write_study_csv(os, output);
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Adaptive mixed finite element solver for Darcy flow with a fault interface"};
  RunOptions options;

  app.add_option("--problem", options.problem,
                 "Benchmark problem: manufactured | linear-fault | fault-flow")
      ->required();
  app.add_option("--family", options.family, "Flux element family: rt1 | bdm1")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, ElementFamily>{{"rt1", ElementFamily::RT1},
                                               {"bdm1", ElementFamily::BDM1}}))
      ->default_str("bdm1");
  app.add_option("--mode", options.mode, "Refinement mode: uniform | adaptive")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, RefinementMode>{{"uniform", RefinementMode::Uniform},
                                                {"adaptive", RefinementMode::Adaptive}}))
      ->default_str("adaptive");
  app.add_option("--theta", options.theta, "Doerfler bulk parameter in (0, 1]")
      ->default_val(0.5);
  double alpha_in = 0.0;
  auto* alpha_opt = app.add_option("--alpha", alpha_in, "Interface Robin coefficient");
  app.add_option("--n", options.n, "Initial structured mesh size (multiple of 4)")
      ->default_val(8);
  app.add_option("--iters", options.iters, "Maximum number of iterations")->default_val(10);
  app.add_option("--max-dofs", options.max_dofs, "Stop once the DOF count reaches this")
      ->default_val(200000);
  app.add_option("--out", options.out, "Results file (default study.csv / study.json)");
  app.add_flag("--json", options.json, "Write JSON instead of CSV");
  app.add_flag("--dump-mesh", options.dump_mesh, "Write a mesh dump per iteration");
  app.add_flag("--dump-matrix", options.dump_matrix,
               "Write the assembled matrix (coordinate format) per iteration");
  app.add_flag("--dump-estimator", options.dump_estimator,
               "Write per-cell/per-edge estimator values per iteration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (alpha_opt->count() > 0) options.alpha = alpha_in;

  try {
    return run(options);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace faultfem
