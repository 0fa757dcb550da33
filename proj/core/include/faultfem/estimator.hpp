#pragma once

#include <functional>
#include <vector>

#include "faultfem/postprocess.hpp"

namespace faultfem {

/// Per-entity error estimator and data oscillation. eta_edge is zero on
/// boundary edges: the estimator's index sets are the interior edges and the
/// fault edges only.
struct EstimatorReport {
  std::vector<double> eta_cell;  // ||u_h + grad p_h*||_{0,T}
  std::vector<double> eta_edge;  // jump terms, see eta_edge()
  std::vector<double> osc_cell;  // h_T ||f - P_h f||_{0,T}
  double eta_total = 0.0;        // sqrt(sum eta_cell^2 + sum eta_edge^2)
  double osc_total = 0.0;
  int edge_moment_order = 0;     // m used on fault edges (0 RT1, 1 BDM1)
};

double eta_cell(const Mesh& mesh, const DofMap& dofmap, const DiscreteSolution& sol,
                const PostPressure& post, int cell);

/// Interior edge: h_E^{-1/2} ||[p_h*]||_{0,E}. Fault edge:
/// alpha^{-1/2} ||(I - P_E^m)[p_h*]||_{0,E} with m = edge_moment_order(family).
/// Boundary edges contribute 0. The jump is plus-cell minus minus-cell trace;
/// only its norm enters, so the sign convention is immaterial.
double eta_edge(const Mesh& mesh, const PostPressure& post, int edge, double alpha,
                ElementFamily family);

double oscillation(const Mesh& mesh, int cell, const std::function<double(Vec2)>& source);

EstimatorReport estimate(const Mesh& mesh, const DofMap& dofmap, const DiscreteSolution& sol,
                         const PostPressure& post, double alpha,
                         const std::function<double(Vec2)>& source);

/// sqrt(eta_total^2 + osc_total^2 / pi^2) / flux_error. Undefined (quiet NaN)
/// when flux_error is zero.
double effectivity(const EstimatorReport& report, double flux_error);

/// Jump of p_h* across an edge at parameter t in [0,1] along a->b (zero on
/// boundary edges). Shared by the estimator and the mean-zero diagnostics.
double postpressure_jump(const Mesh& mesh, const PostPressure& post, int edge, double t);

}  // namespace faultfem
