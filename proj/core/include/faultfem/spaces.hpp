#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "faultfem/mesh.hpp"

namespace faultfem {

/// Lowest-order H(div) flux families: RT1 has one constant normal-trace DOF
/// per edge, BDM1 has two (moments against an orthonormal P1 basis on the
/// edge). The pressure space is cellwise constant for both.
enum class ElementFamily { RT1, BDM1 };

inline int moments_per_edge(ElementFamily f) { return f == ElementFamily::RT1 ? 1 : 2; }

/// Order m of the normal trace on an edge: 0 for RT1, 1 for BDM1.
inline int edge_moment_order(ElementFamily f) { return f == ElementFamily::RT1 ? 0 : 1; }

/// Value at arc length s of the j-th L2-orthonormal polynomial on a segment
/// of length len: q0 = 1/sqrt(len), q1 = sqrt(12/len^3) (s - len/2).
double edge_orthonormal(int j, double s, double len);

/// DOF moment weight for family/moment j at arc length s. RT1 uses the plain
/// flux integral (weight 1); BDM1 uses the orthonormal basis above.
double edge_moment_weight(ElementFamily f, int j, double s, double len);

/// Global flux/pressure DOF layout for one mesh. Edge DOFs are defined
/// against the mesh's globally oriented edge normal and the a->b arc length;
/// the per-(cell, local edge) orientation sign relates the cell's outward
/// normal to the global one, so shared DOFs carry opposite signs in the two
/// adjacent cells and normal continuity is automatic.
class DofMap {
 public:
  DofMap(const Mesh& mesh, ElementFamily family);

  ElementFamily family() const { return family_; }
  int n_flux() const { return n_flux_; }
  int n_pressure() const { return n_pressure_; }
  int n_total() const { return n_flux_ + n_pressure_; }

  int flux_dof(int edge, int moment) const { return edge * dpe_ + moment; }
  int pressure_dof(int cell) const { return n_flux_ + cell; }
  int dofs_per_edge() const { return dpe_; }

  double orientation(int cell, int local_edge) const {
    return static_cast<double>(orient_[3 * cell + local_edge]);
  }

  bool flux_dof_constrained(int dof) const { return constrained_[dof] != 0; }

  /// Consistency check against a mesh (refine() produces new meshes; a stale
  /// DofMap must not be used with them).
  bool matches(const Mesh& mesh) const;

 private:
  ElementFamily family_;
  int dpe_;
  int n_flux_;
  int n_pressure_;
  int n_edges_;
  std::vector<signed char> orient_;   // 3 per cell
  std::vector<char> constrained_;     // per flux dof (Neumann edges)
};

/// Flux shape functions of one cell, dual to the edge-moment DOFs taken with
/// the cell's outward normals (assembly applies the orientation signs).
/// DOF order is local-edge major: j = local_edge * moments_per_edge + moment.
/// Stored as coefficients over monomials in ((x,y) - centroid)/h.
class FluxBasis {
 public:
  FluxBasis(const Mesh& mesh, int cell, ElementFamily family);

  int size() const { return n_; }
  Vec2 value(int j, Vec2 x) const;
  double div(int j) const { return div_[j]; }

  /// Field value for local coefficients c: sum_j c[j] value(j, x).
  Vec2 combine(std::span<const double> c, Vec2 x) const;

 private:
  int n_;
  bool family_rt_ = false;
  Vec2 centroid_;
  double h_;
  std::array<std::array<double, 6>, 6> coef_{};  // coef_[j][k]: monomial k of shape j
  std::array<double, 6> div_{};
};

/// Local coefficients of a global flux vector on `cell` (orientation signs
/// applied), in FluxBasis DOF order. Only the first 3*moments_per_edge
/// entries are meaningful.
std::array<double, 6> gather_flux(const Mesh& mesh, const DofMap& dofmap,
                                  std::span<const double> flux, int cell);

/// Edge-moment interpolation of an analytic vector field into the flux space.
std::vector<double> interpolate_flux(const Mesh& mesh, const DofMap& dofmap,
                                     const std::function<Vec2(Vec2)>& field);

/// Lagrange P2 basis on a physical cell. Nodes: the 3 vertices, then the
/// midpoints of (v0,v1), (v1,v2), (v2,v0).
class P2Basis {
 public:
  P2Basis(const Mesh& mesh, int cell);

  static double value(int i, double l0, double l1, double l2);
  Vec2 gradient(int i, double l0, double l1, double l2) const;

 private:
  std::array<Vec2, 3> grad_lambda_;
};

}  // namespace faultfem
