#include "faultfem/system.hpp"

#include <Eigen/SparseLU>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "faultfem/quadrature.hpp"

namespace faultfem {

LinearSystem assemble(const Mesh& mesh, const DofMap& dofmap, const ProblemData& data) {
  if (!(data.alpha > 0.0)) throw std::invalid_argument("assemble: alpha must be positive");
  if (!(data.kappa > 0.0)) throw std::invalid_argument("assemble: kappa must be positive");
  if (!dofmap.matches(mesh))
    throw std::invalid_argument("assemble: dofmap was built for a different mesh");

  LinearSystem sys;
  sys.n_flux = dofmap.n_flux();
  sys.n_pressure = dofmap.n_pressure();
  const int n = dofmap.n_total();
  sys.rhs = Eigen::VectorXd::Zero(n);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.num_cells()) * 48);

  const TriangleRule& cell_rule = triangle_rule(kAssemblyDegree);
  const TriangleRule& data_rule = triangle_rule(kDataDegree);
  const EdgeRule& gamma_rule = edge_rule(kAssemblyDegree);
  const EdgeRule& bdata_rule = edge_rule(kDataDegree);
  const int dpe = dofmap.dofs_per_edge();
  const double inv_kappa = 1.0 / data.kappa;

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const FluxBasis basis(mesh, c, dofmap.family());
    const int nb = basis.size();
    const double area = mesh.cell_area(c);

    int gdof[6];
    double sigma[6];
    for (int le = 0; le < 3; ++le) {
      const int e = mesh.cell(c).edge[le];
      for (int j = 0; j < dpe; ++j) {
        gdof[le * dpe + j] = dofmap.flux_dof(e, j);
        sigma[le * dpe + j] = dofmap.orientation(c, le);
      }
    }

    // kappa^{-1} flux mass matrix.
    double m[6][6] = {};
    for (int q = 0; q < cell_rule.size(); ++q) {
      const auto& bp = cell_rule.points()[q];
      const double w = cell_rule.weights()[q] * 2.0 * area;
      const Vec2 x = mesh.point(c, bp.l0, bp.l1, bp.l2);
      Vec2 val[6];
      for (int j = 0; j < nb; ++j) val[j] = basis.value(j, x);
      for (int j = 0; j < nb; ++j)
        for (int k = j; k < nb; ++k) m[j][k] += w * inv_kappa * dot(val[j], val[k]);
    }
    for (int j = 0; j < nb; ++j)
      for (int k = j; k < nb; ++k) {
        const double v = sigma[j] * sigma[k] * m[j][k];
        trips.emplace_back(gdof[j], gdof[k], v);
        if (k != j) trips.emplace_back(gdof[k], gdof[j], v);
      }

    // Divergence coupling acting on the negated pressure unknown.
    const int pdof = dofmap.pressure_dof(c);
    for (int j = 0; j < nb; ++j) {
      const double v = sigma[j] * basis.div(j) * area;
      trips.emplace_back(gdof[j], pdof, v);
      trips.emplace_back(pdof, gdof[j], v);
    }

    // Source term (f, q)_T.
    if (data.source)
      sys.rhs[pdof] = integrate(mesh, c, data_rule, data.source);
  }

  // Interface term: each fault edge visited once, normal traces taken from
  // the plus cell (the global trace is side-independent by construction).
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge(e).tag != EdgeTag::InterfaceGamma) continue;
    const int c = mesh.edge_cell_plus(e);
    const int le = mesh.local_edge(c, e);
    const FluxBasis basis(mesh, c, dofmap.family());
    const Vec2 n_out = mesh.outward_normal(c, le);
    const Vec2 a = mesh.vertex_pos(mesh.edge(e).a);
    const Vec2 b = mesh.vertex_pos(mesh.edge(e).b);
    const double len = mesh.edge_length(e);
    double m[2][2] = {};
    for (int q = 0; q < gamma_rule.size(); ++q) {
      const double t = gamma_rule.points()[q];
      const double w = gamma_rule.weights()[q] * len;
      const Vec2 x = a + t * (b - a);
      double tr[2];
      for (int j = 0; j < dpe; ++j) tr[j] = dot(basis.value(le * dpe + j, x), n_out);
      for (int j = 0; j < dpe; ++j)
        for (int k = 0; k < dpe; ++k) m[j][k] += w * data.alpha * tr[j] * tr[k];
    }
    for (int j = 0; j < dpe; ++j)
      for (int k = 0; k < dpe; ++k)
        trips.emplace_back(dofmap.flux_dof(e, j), dofmap.flux_dof(e, k), m[j][k]);
  }

  // Boundary data: natural Dirichlet term and essential Neumann constraints.
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const EdgeTag tag = mesh.edge(e).tag;
    if (tag != EdgeTag::DirichletBoundary && tag != EdgeTag::NeumannBoundary) continue;
    if (tag == EdgeTag::DirichletBoundary) ++sys.n_dirichlet_edges;

    const int c = mesh.edge_cell_plus(e);
    const int le = mesh.local_edge(c, e);
    const double sigma = dofmap.orientation(c, le);
    const Vec2 a = mesh.vertex_pos(mesh.edge(e).a);
    const Vec2 b = mesh.vertex_pos(mesh.edge(e).b);
    const double len = mesh.edge_length(e);

    if (tag == EdgeTag::DirichletBoundary) {
      if (!data.dirichlet) continue;
      const FluxBasis basis(mesh, c, dofmap.family());
      const Vec2 n_out = mesh.outward_normal(c, le);
      for (int q = 0; q < bdata_rule.size(); ++q) {
        const double t = bdata_rule.points()[q];
        const double w = bdata_rule.weights()[q] * len;
        const Vec2 x = a + t * (b - a);
        const double gd = data.dirichlet(x);
        for (int j = 0; j < dpe; ++j)
          sys.rhs[dofmap.flux_dof(e, j)] -=
              sigma * w * gd * dot(basis.value(le * dpe + j, x), n_out);
      }
    } else {
      for (int j = 0; j < dpe; ++j) {
        double val = 0.0;
        if (data.neumann) {
          for (int q = 0; q < bdata_rule.size(); ++q) {
            const double t = bdata_rule.points()[q];
            const double w = bdata_rule.weights()[q] * len;
            val += w * data.neumann(a + t * (b - a)) *
                   edge_moment_weight(dofmap.family(), j, t * len, len);
          }
        }
        sys.constraints.emplace_back(dofmap.flux_dof(e, j), sigma * val);
      }
    }
  }

  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

DiscreteSolution solve(const LinearSystem& system) {
  if (system.n_dirichlet_edges == 0)
    throw std::runtime_error(
        "solve: ill-posed system, no Dirichlet edge fixes the pressure (pure Neumann "
        "problem determines p only up to a constant)");

  const int n = system.n_flux + system.n_pressure;
  std::vector<char> fixed(n, 0);
  Eigen::VectorXd value = Eigen::VectorXd::Zero(n);
  for (const auto& [dof, v] : system.constraints) {
    fixed[dof] = 1;
    value[dof] = v;
  }

  // Symmetric elimination of constrained DOFs: drop their rows/columns, move
  // the column contribution to the right-hand side, keep a unit diagonal.
  Eigen::VectorXd rhs = system.rhs;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(system.matrix.nonZeros() + system.constraints.size());
  for (int col = 0; col < system.matrix.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, col); it; ++it) {
      const int r = static_cast<int>(it.row());
      if (fixed[r]) continue;
      if (fixed[col]) {
        rhs[r] -= it.value() * value[col];
      } else {
        trips.emplace_back(r, col, it.value());
      }
    }
  }
  for (int d = 0; d < n; ++d)
    if (fixed[d]) {
      trips.emplace_back(d, d, 1.0);
      rhs[d] = value[d];
    }
  Eigen::SparseMatrix<double> mat(n, n);
  mat.setFromTriplets(trips.begin(), trips.end());
  mat.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(mat);
  lu.factorize(mat);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve: sparse LU factorization failed (singular system?)");
  Eigen::VectorXd x = lu.solve(rhs);

  const double rhs_norm = rhs.norm();
  const double res = (mat * x - rhs).norm();
  const double rel = rhs_norm > 0.0 ? res / rhs_norm : res;
  if (!(rel <= 1e-10))
    throw std::runtime_error("solve: residual contract violated, relative residual " +
                             std::to_string(rel));

  for (int d = 0; d < n; ++d)
    if (fixed[d]) x[d] = value[d];

  DiscreteSolution sol;
  sol.flux = x.head(system.n_flux);
  sol.cell_pressure = -x.tail(system.n_pressure);  // stored unknown is -p
  sol.residual = rel;
  return sol;
}

Vec2 flux_value(const Mesh& mesh, const DofMap& dofmap, const DiscreteSolution& sol,
                int cell, Vec2 x) {
  const FluxBasis basis(mesh, cell, dofmap.family());
  const auto local = gather_flux(
      mesh, dofmap, std::span<const double>(sol.flux.data(), sol.flux.size()), cell);
  return basis.combine(std::span<const double>(local.data(), basis.size()), x);
}

double flux_divergence(const Mesh& mesh, const DofMap& dofmap, const DiscreteSolution& sol,
                       int cell) {
  const FluxBasis basis(mesh, cell, dofmap.family());
  const auto local = gather_flux(
      mesh, dofmap, std::span<const double>(sol.flux.data(), sol.flux.size()), cell);
  double d = 0.0;
  for (int j = 0; j < basis.size(); ++j) d += local[j] * basis.div(j);
  return d;
}

double mass_balance_residual(const Mesh& mesh, const DofMap& dofmap,
                             const DiscreteSolution& sol,
                             const std::function<double(Vec2)>& source) {
  const TriangleRule& rule = triangle_rule(kDataDegree);
  double sum = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double area = mesh.cell_area(c);
    const double mean_f = source ? integrate(mesh, c, rule, source) / area : 0.0;
    const double d = flux_divergence(mesh, dofmap, sol, c) - mean_f;
    sum += d * d * area;
  }
  return std::sqrt(sum);
}

void write_matrix_coordinate(std::ostream& os, const LinearSystem& system) {
  char buf[96];
  for (int col = 0; col < system.matrix.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, col); it; ++it) {
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", static_cast<long>(it.row()),
                    static_cast<long>(it.col()), it.value());
      os << buf;
    }
  }
}

}  // namespace faultfem
