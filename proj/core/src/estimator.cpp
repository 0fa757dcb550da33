#include "faultfem/estimator.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "faultfem/quadrature.hpp"

namespace faultfem {

namespace {

// [p_h*] is a quadratic on the edge, so the squared jump needs degree 4.
constexpr int kJumpDegree = 5;

// Trace of p_h* on an edge, taken from one adjacent cell, at parameter t
// along the a->b direction.
double trace_from_cell(const Mesh& mesh, const PostPressure& post, int cell, int edge,
                       double t) {
  const int ia = mesh.local_vertex(cell, mesh.edge(edge).a);
  const int ib = mesh.local_vertex(cell, mesh.edge(edge).b);
  double l[3] = {0.0, 0.0, 0.0};
  l[ia] = 1.0 - t;
  l[ib] = t;
  return post.value(cell, l[0], l[1], l[2]);
}

}  // namespace

double postpressure_jump(const Mesh& mesh, const PostPressure& post, int edge, double t) {
  if (mesh.is_boundary_edge(edge)) return 0.0;
  return trace_from_cell(mesh, post, mesh.edge_cell_plus(edge), edge, t) -
         trace_from_cell(mesh, post, mesh.edge_cell_minus(edge), edge, t);
}

double eta_cell(const Mesh& mesh, const DofMap& dofmap, const DiscreteSolution& sol,
                const PostPressure& post, int cell) {
  const TriangleRule& rule = triangle_rule(kAssemblyDegree);
  const FluxBasis basis(mesh, cell, dofmap.family());
  const auto local = gather_flux(
      mesh, dofmap, std::span<const double>(sol.flux.data(), sol.flux.size()), cell);
  const P2Basis p2(mesh, cell);
  const double area = mesh.cell_area(cell);
  double sum = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    const auto& bp = rule.points()[q];
    const Vec2 x = mesh.point(cell, bp.l0, bp.l1, bp.l2);
    Vec2 r = basis.combine(std::span<const double>(local.data(), basis.size()), x);
    for (int i = 0; i < 6; ++i)
      r = r + post.coeffs[cell][i] * p2.gradient(i, bp.l0, bp.l1, bp.l2);
    sum += rule.weights()[q] * 2.0 * area * dot(r, r);
  }
  return std::sqrt(sum);
}

double eta_edge(const Mesh& mesh, const PostPressure& post, int edge, double alpha,
                ElementFamily family) {
  if (mesh.is_boundary_edge(edge)) return 0.0;
  const EdgeRule& rule = edge_rule(kJumpDegree);
  const double len = mesh.edge_length(edge);

  if (mesh.edge(edge).tag == EdgeTag::Interior) {
    double sum = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const double j = postpressure_jump(mesh, post, edge, rule.points()[q]);
      sum += rule.weights()[q] * len * j * j;
    }
    return std::sqrt(sum / len);
  }

  // Fault edge: alpha^{-1/2} ||(I - P_E^m)[p_h*]||, the projection expressed
  // in the orthonormal edge basis (truncation of moment coefficients).
  const int m = edge_moment_order(family);
  double coef[2] = {0.0, 0.0};
  for (int q = 0; q < rule.size(); ++q) {
    const double t = rule.points()[q];
    const double w = rule.weights()[q] * len;
    const double j = postpressure_jump(mesh, post, edge, t);
    for (int k = 0; k <= m; ++k) coef[k] += w * j * edge_orthonormal(k, t * len, len);
  }
  double sum = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    const double t = rule.points()[q];
    double r = postpressure_jump(mesh, post, edge, t);
    for (int k = 0; k <= m; ++k) r -= coef[k] * edge_orthonormal(k, t * len, len);
    sum += rule.weights()[q] * len * r * r;
  }
  return std::sqrt(sum / alpha);
}

double oscillation(const Mesh& mesh, int cell, const std::function<double(Vec2)>& source) {
  if (!source) return 0.0;
  const TriangleRule& rule = triangle_rule(kDataDegree);
  const double area = mesh.cell_area(cell);
  const double mean = integrate(mesh, cell, rule, source) / area;
  const double var = integrate(mesh, cell, rule, [&](Vec2 x) {
    const double d = source(x) - mean;
    return d * d;
  });
  return mesh.cell_diameter(cell) * std::sqrt(std::max(0.0, var));
}

EstimatorReport estimate(const Mesh& mesh, const DofMap& dofmap, const DiscreteSolution& sol,
                         const PostPressure& post, double alpha,
                         const std::function<double(Vec2)>& source) {
  if (!dofmap.matches(mesh))
    throw std::invalid_argument("estimate: dofmap was built for a different mesh");
  if (!(alpha > 0.0)) throw std::invalid_argument("estimate: alpha must be positive");
  EstimatorReport report;
  report.edge_moment_order = edge_moment_order(dofmap.family());
  report.eta_cell.resize(mesh.num_cells());
  report.osc_cell.resize(mesh.num_cells());
  report.eta_edge.resize(mesh.num_edges());

  double eta2 = 0.0, osc2 = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    report.eta_cell[c] = eta_cell(mesh, dofmap, sol, post, c);
    report.osc_cell[c] = oscillation(mesh, c, source);
    eta2 += report.eta_cell[c] * report.eta_cell[c];
    osc2 += report.osc_cell[c] * report.osc_cell[c];
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    report.eta_edge[e] = eta_edge(mesh, post, e, alpha, dofmap.family());
    eta2 += report.eta_edge[e] * report.eta_edge[e];
  }
  report.eta_total = std::sqrt(eta2);
  report.osc_total = std::sqrt(osc2);
  return report;
}

double effectivity(const EstimatorReport& report, double flux_error) {
  if (flux_error == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double osc = report.osc_total / std::numbers::pi;
  return std::sqrt(report.eta_total * report.eta_total + osc * osc) / flux_error;
}

}  // namespace faultfem
