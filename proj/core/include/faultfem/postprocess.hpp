#pragma once

#include <array>
#include <vector>

#include "faultfem/system.hpp"

namespace faultfem {

/// Cellwise quadratic post-processed pressure p_h*, stored in the Lagrange P2
/// basis of each physical cell. On every cell, (grad p_h*, grad q)_T =
/// -(u_h, grad q)_T for all quadratic q and the cell mean of p_h* equals p_h.
struct PostPressure {
  std::vector<std::array<double, 6>> coeffs;
  double max_condition = 0.0;  // largest local saddle-system condition number

  double value(int cell, double l0, double l1, double l2) const;
  Vec2 gradient(const Mesh& mesh, int cell, double l0, double l1, double l2) const;
};

/// Solve the local gradient-recovery problem with a mean constraint on every
/// cell (6 P2 coefficients + 1 multiplier). Each local solve is checked to
/// residual 1e-12 relative.
PostPressure postprocess(const Mesh& mesh, const DofMap& dofmap, const DiscreteSolution& sol);

}  // namespace faultfem
