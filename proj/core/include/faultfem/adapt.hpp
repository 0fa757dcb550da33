#pragma once

#include "faultfem/problems.hpp"

namespace faultfem {

enum class RefinementMode { Uniform, Adaptive };

struct AdaptConfig {
  RefinementMode mode = RefinementMode::Adaptive;
  double theta = 0.5;          // Doerfler bulk parameter, in (0, 1]
  int max_iterations = 10;
  int max_dofs = 200000;
  ElementFamily family = ElementFamily::BDM1;
  int initial_n = 8;
};

/// One row of a study: mesh/DOF sizes, estimator totals, errors when the
/// problem has an exact solution, and marking statistics. endpoint_fraction
/// is the fraction of marked cells whose centroid lies within radius 0.1 of
/// either fault endpoint.
struct StudyRecord {
  int iteration = 0;
  int n_cells = 0;
  int n_dofs = 0;
  double eta_total = 0.0;
  double osc_total = 0.0;
  std::optional<double> flux_error;
  std::optional<double> postpressure_error;
  std::optional<double> tnorm_error;
  std::optional<double> effectivity;
  int n_marked = 0;
  double endpoint_fraction = 0.0;
};

/// Doerfler marking: cell indicators are eta_T^2 plus half of each adjacent
/// non-boundary edge term (the 50/50 split credits each side once); returns
/// the minimal prefix of cells, sorted by descending indicator with ties
/// broken by cell id, whose indicator sum reaches theta times the total.
std::vector<int> mark(const EstimatorReport& report, const Mesh& mesh, double theta);

/// Hook for per-iteration output (mesh/matrix/estimator dumps).
using StudyObserver =
    std::function<void(int iteration, const Mesh& mesh, const LinearSystem& system,
                       const EstimatorReport& report)>;

/// Solve -> postprocess -> estimate -> mark -> refine loop. Uniform mode
/// marks every cell. Stops after max_iterations records or once the DOF count
/// reaches max_dofs. Deterministic: identical inputs give identical records.
std::vector<StudyRecord> run_study(const ProblemDefinition& problem, const AdaptConfig& config,
                                   const StudyObserver& observer = {});

}  // namespace faultfem
