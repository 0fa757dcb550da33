#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "faultfem/spaces.hpp"

namespace faultfem {

/// Coefficients and data of one Darcy problem instance. alpha is the Robin
/// coefficient of the interface condition alpha u·n - [p] = 0 on the fault;
/// kappa is the uniform scalar permeability.
struct ProblemData {
  double alpha = 1.0;
  double kappa = 1.0;
  std::function<double(Vec2)> source;     // f
  std::function<double(Vec2)> dirichlet;  // g_D, pressure trace on Dirichlet edges
  std::function<double(Vec2)> neumann;    // g_N, outward normal flux on Neumann edges
};

/// Assembled saddle-point system [[A, B^T], [B, 0]] acting on (u, -p):
/// A is the kappa^{-1} flux mass matrix plus the alpha edge mass on the fault,
/// B[T,j] = (div phi_j, 1)_T. The negated pressure unknown keeps the stored
/// matrix symmetric while the coupling realizes -(p, div v); solve() flips the
/// sign back. Neumann flux DOFs are listed in `constraints`.
struct LinearSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<std::pair<int, double>> constraints;
  int n_flux = 0;
  int n_pressure = 0;
  int n_dirichlet_edges = 0;
};

struct DiscreteSolution {
  Eigen::VectorXd flux;          // coefficients of u_h
  Eigen::VectorXd cell_pressure; // p_h per cell
  double residual = 0.0;         // relative residual of the constrained solve
};

/// Assemble the discrete mixed problem. Throws std::invalid_argument on
/// alpha <= 0, kappa <= 0 or a dofmap built for a different mesh.
LinearSystem assemble(const Mesh& mesh, const DofMap& dofmap, const ProblemData& data);

/// Direct sparse solve. Throws std::runtime_error on an ill-posed system
/// (no Dirichlet edge fixes the pressure: pure Neumann) or a failed/inaccurate
/// factorization (relative residual above 1e-10).
DiscreteSolution solve(const LinearSystem& system);

/// u_h as a vector field on one cell.
Vec2 flux_value(const Mesh& mesh, const DofMap& dofmap, const DiscreteSolution& sol,
                int cell, Vec2 x);

/// Cellwise div u_h (constant per cell for both families).
double flux_divergence(const Mesh& mesh, const DofMap& dofmap, const DiscreteSolution& sol,
                       int cell);

/// ||div u_h - P_h f||_0; exact mass balance makes this vanish to solver
/// precision since div V_h = Q_h.
double mass_balance_residual(const Mesh& mesh, const DofMap& dofmap,
                             const DiscreteSolution& sol,
                             const std::function<double(Vec2)>& source);

/// Coordinate-format text dump: one "i j value" line per stored entry.
void write_matrix_coordinate(std::ostream& os, const LinearSystem& system);

}  // namespace faultfem
