#pragma once

#include <optional>
#include <string>

#include "faultfem/estimator.hpp"

namespace faultfem {

struct ExactSolution {
  std::function<double(Vec2)> pressure;
  std::function<Vec2(Vec2)> flux;
};

struct ProblemDefinition {
  std::string name;
  ProblemGeometry geometry;
  ProblemData data;
  std::optional<ExactSolution> exact;
};

/// Trigonometric manufactured solution supported on the strip 1/4 <= y <= 3/4
/// with a pressure jump across the fault; homogeneous Dirichlet boundary.
/// alpha = 4/(3*pi) is the unique value for which the interface condition
/// holds and is fixed (read it from data.alpha).
ProblemDefinition manufactured();

/// Piecewise-linear exactness test: p = -x left of the fault, -x - alpha
/// right of it, u = (1,0), f = 0, Dirichlet data = trace of p. The fault
/// spans the full height so the jump line is entirely interface.
ProblemDefinition linear_fault(double alpha);

/// Unit source, zero flux through top/bottom, p = 0 at x = 0 and p = -1 at
/// x = 1. No exact solution.
ProblemDefinition fault_flow(double alpha);

struct ErrorNorms {
  double flux_l2 = 0.0;          // ||u - u_h||_0
  double postpressure_l2 = 0.0;  // ||p - p_h*||_0
  double tnorm = 0.0;            // (flux_l2^2 + sum_Gamma alpha ||(u-u_h)·n||^2)^(1/2)
};

/// Errors against the problem's exact solution (throws std::invalid_argument
/// if it has none). Regionwise evaluation with the data-degree quadrature.
ErrorNorms error_norms(const Mesh& mesh, const DofMap& dofmap, const DiscreteSolution& sol,
                       const PostPressure& post, const ProblemDefinition& problem);

}  // namespace faultfem
