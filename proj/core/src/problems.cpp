#include "faultfem/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "faultfem/quadrature.hpp"
#include "faultfem/system.hpp"

namespace faultfem {

namespace {

constexpr double kPi = std::numbers::pi;

// Manufactured pressure, supported on the strip 1/4 <= y <= 3/4:
//   left of the fault   p =  sin(3 pi x / 2)       cos^2(2 pi (y - 1/2))
//   right of the fault  p = -sin(3 pi (1 - x) / 2) cos^2(2 pi (y - 1/2))
// u = -grad p and f = -lap p per region; the strip boundaries and the fault
// are mesh lines, so quadrature points never hit the region switches.
struct ManufacturedFields {
  static bool in_strip(Vec2 p) { return p.y >= 0.25 && p.y <= 0.75; }

  static double pressure(Vec2 p) {
    if (!in_strip(p)) return 0.0;
    const double c = std::cos(2.0 * kPi * (p.y - 0.5));
    if (p.x < 0.5) return std::sin(1.5 * kPi * p.x) * c * c;
    return -std::sin(1.5 * kPi * (1.0 - p.x)) * c * c;
  }

  static Vec2 flux(Vec2 p) {
    if (!in_strip(p)) return {0.0, 0.0};
    const double th = 2.0 * kPi * (p.y - 0.5);
    const double c2 = std::cos(th) * std::cos(th);
    const double s2th = std::sin(2.0 * th);
    if (p.x < 0.5) {
      const double s = std::sin(1.5 * kPi * p.x);
      const double c = std::cos(1.5 * kPi * p.x);
      return {-1.5 * kPi * c * c2, 2.0 * kPi * s * s2th};
    }
    const double s = std::sin(1.5 * kPi * (1.0 - p.x));
    const double c = std::cos(1.5 * kPi * (1.0 - p.x));
    return {-1.5 * kPi * c * c2, -2.0 * kPi * s * s2th};
  }

  static double source(Vec2 p) {
    if (!in_strip(p)) return 0.0;
    const double th = 2.0 * kPi * (p.y - 0.5);
    const double c2 = std::cos(th) * std::cos(th);
    const double c2th = std::cos(2.0 * th);
    const double a2 = 2.25 * kPi * kPi;  // (3 pi / 2)^2
    if (p.x < 0.5) {
      const double s = std::sin(1.5 * kPi * p.x);
      return a2 * s * c2 + 8.0 * kPi * kPi * s * c2th;
    }
    const double s = std::sin(1.5 * kPi * (1.0 - p.x));
    return -a2 * s * c2 - 8.0 * kPi * kPi * s * c2th;
  }
};

}  // namespace

ProblemDefinition manufactured() {
  ProblemDefinition def;
  def.name = "manufactured";
  def.geometry = ProblemGeometry::problem1();
  // The interface condition alpha u.n = [p] forces alpha: the jump is
  // sqrt(2) cos^2 and the normal flux (3 pi sqrt(2)/4) cos^2.
  def.data.alpha = 4.0 / (3.0 * kPi);
  def.data.kappa = 1.0;
  def.data.source = ManufacturedFields::source;
  def.data.dirichlet = [](Vec2) { return 0.0; };
  def.exact = ExactSolution{ManufacturedFields::pressure, ManufacturedFields::flux};
  return def;
}

ProblemDefinition linear_fault(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("linear_fault: alpha must be positive");
  ProblemDefinition def;
  def.name = "linear-fault";
  def.geometry = ProblemGeometry::full_fault();
  def.data.alpha = alpha;
  def.data.kappa = 1.0;
  def.data.source = [](Vec2) { return 0.0; };
  const auto pressure = [alpha](Vec2 p) { return p.x < 0.5 ? -p.x : -p.x - alpha; };
  def.data.dirichlet = pressure;
  def.exact = ExactSolution{pressure, [](Vec2) { return Vec2{1.0, 0.0}; }};
  return def;
}

ProblemDefinition fault_flow(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("fault_flow: alpha must be positive");
  ProblemDefinition def;
  def.name = "fault-flow";
  def.geometry = ProblemGeometry::problem2();
  def.data.alpha = alpha;
  def.data.kappa = 1.0;
  def.data.source = [](Vec2) { return 1.0; };
  def.data.dirichlet = [](Vec2 p) { return p.x < 0.5 ? 0.0 : -1.0; };
  def.data.neumann = [](Vec2) { return 0.0; };
  return def;
}

ErrorNorms error_norms(const Mesh& mesh, const DofMap& dofmap, const DiscreteSolution& sol,
                       const PostPressure& post, const ProblemDefinition& problem) {
  if (!problem.exact)
    throw std::invalid_argument("error_norms: problem has no exact solution");
  if (!dofmap.matches(mesh))
    throw std::invalid_argument("error_norms: dofmap was built for a different mesh");
  const auto& exact = *problem.exact;
  const TriangleRule& rule = triangle_rule(kDataDegree);
  const EdgeRule& erule = edge_rule(kDataDegree);

  double flux2 = 0.0, post2 = 0.0;
  const std::span<const double> flux(sol.flux.data(), static_cast<std::size_t>(sol.flux.size()));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const FluxBasis basis(mesh, c, dofmap.family());
    const auto local = gather_flux(mesh, dofmap, flux, c);
    const double jac = 2.0 * mesh.cell_area(c);
    for (int q = 0; q < rule.size(); ++q) {
      const auto& bp = rule.points()[q];
      const Vec2 x = mesh.point(c, bp.l0, bp.l1, bp.l2);
      const Vec2 du =
          exact.flux(x) - basis.combine(std::span<const double>(local.data(), basis.size()), x);
      const double dp = exact.pressure(x) - post.value(c, bp.l0, bp.l1, bp.l2);
      flux2 += rule.weights()[q] * jac * dot(du, du);
      post2 += rule.weights()[q] * jac * dp * dp;
    }
  }

  double gamma2 = 0.0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge(e).tag != EdgeTag::InterfaceGamma) continue;
    const Vec2 n = mesh.edge_normal(e);
    const int c = mesh.edge_cell_plus(e);
    gamma2 += problem.data.alpha * integrate_edge(mesh, e, erule, [&](Vec2 x) {
                const double dn = dot(exact.flux(x) - flux_value(mesh, dofmap, sol, c, x), n);
                return dn * dn;
              });
  }

  ErrorNorms norms;
  norms.flux_l2 = std::sqrt(flux2);
  norms.postpressure_l2 = std::sqrt(post2);
  norms.tnorm = std::sqrt(flux2 + gamma2);
  return norms;
}

}  // namespace faultfem
