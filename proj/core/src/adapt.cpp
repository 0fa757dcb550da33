#include "faultfem/adapt.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "faultfem/quadrature.hpp"

namespace faultfem {

namespace {

constexpr double kEndpointRadius = 0.1;

std::vector<double> cell_indicators(const EstimatorReport& report, const Mesh& mesh) {
  // eta_T^2 plus half of each adjacent non-boundary edge term; the 50/50
  // split credits every edge exactly once across the mesh.
  std::vector<double> ind(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c)
    ind[c] = report.eta_cell[c] * report.eta_cell[c];
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.is_boundary_edge(e)) continue;
    const double half = 0.5 * report.eta_edge[e] * report.eta_edge[e];
    ind[mesh.edge_cell_plus(e)] += half;
    ind[mesh.edge_cell_minus(e)] += half;
  }
  return ind;
}

double endpoint_fraction(const Mesh& mesh, const std::vector<int>& marked) {
  if (marked.empty()) return 0.0;
  const Vec2 lo{0.5, mesh.geometry().gamma_y0};
  const Vec2 hi{0.5, mesh.geometry().gamma_y1};
  int near = 0;
  for (int c : marked) {
    const Vec2 x = mesh.cell_centroid(c);
    if (norm(x - lo) <= kEndpointRadius || norm(x - hi) <= kEndpointRadius) ++near;
  }
  return static_cast<double>(near) / static_cast<double>(marked.size());
}

}  // namespace

std::vector<int> mark(const EstimatorReport& report, const Mesh& mesh, double theta) {
  if (!(theta > 0.0) || theta > 1.0)
    throw std::invalid_argument("mark: theta must be in (0, 1]");
  const std::vector<double> ind = cell_indicators(report, mesh);

  std::vector<int> order(mesh.num_cells());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ind[a] != ind[b]) return ind[a] > ind[b];
    return a < b;
  });

  // Totals accumulated in the same (sorted) order as the prefix sums, so the
  // theta = 1 case marks exactly the positive-indicator cells.
  double total = 0.0;
  for (int c : order) total += ind[c];
  if (total <= 0.0) return {};

  std::vector<int> marked;
  double sum = 0.0;
  for (int c : order) {
    if (sum >= theta * total) break;
    if (ind[c] <= 0.0) break;
    marked.push_back(c);
    sum += ind[c];
  }
  return marked;
}

std::vector<StudyRecord> run_study(const ProblemDefinition& problem, const AdaptConfig& config,
                                   const StudyObserver& observer) {
  if (!(config.theta > 0.0) || config.theta > 1.0)
    throw std::invalid_argument("run_study: theta must be in (0, 1]");
  if (config.max_iterations < 1)
    throw std::invalid_argument("run_study: max_iterations must be at least 1");

  std::vector<StudyRecord> records;
  Mesh mesh = Mesh::structured(config.initial_n, problem.geometry);

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    const DofMap dofmap(mesh, config.family);
    const LinearSystem system = assemble(mesh, dofmap, problem.data);
    const DiscreteSolution sol = solve(system);
    const PostPressure post = postprocess(mesh, dofmap, sol);
    const EstimatorReport report =
        estimate(mesh, dofmap, sol, post, problem.data.alpha, problem.data.source);

    std::vector<int> marked;
    if (config.mode == RefinementMode::Uniform) {
      marked.resize(mesh.num_cells());
      std::iota(marked.begin(), marked.end(), 0);
    } else {
      marked = mark(report, mesh, config.theta);
    }

    StudyRecord rec;
    rec.iteration = iter;
    rec.n_cells = mesh.num_cells();
    rec.n_dofs = dofmap.n_total();
    rec.eta_total = report.eta_total;
    rec.osc_total = report.osc_total;
    rec.n_marked = static_cast<int>(marked.size());
    rec.endpoint_fraction = endpoint_fraction(mesh, marked);
    if (problem.exact) {
      const ErrorNorms norms = error_norms(mesh, dofmap, sol, post, problem);
      rec.flux_error = norms.flux_l2;
      rec.postpressure_error = norms.postpressure_l2;
      rec.tnorm_error = norms.tnorm;
      rec.effectivity = effectivity(report, norms.flux_l2);
    }
    records.push_back(rec);
    if (observer) observer(iter, mesh, system, report);

    if (iter + 1 >= config.max_iterations) break;
    if (dofmap.n_total() >= config.max_dofs) break;
    if (marked.empty()) continue;  // nothing to refine; later records repeat
    mesh = mesh.refine(marked);
  }
  return records;
}

}  // namespace faultfem
