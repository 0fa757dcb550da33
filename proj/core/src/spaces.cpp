#include "faultfem/spaces.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "faultfem/quadrature.hpp"

namespace faultfem {

namespace {

constexpr int kEdgeEnds[3][2] = {{1, 2}, {2, 0}, {0, 1}};

}  // namespace

double edge_orthonormal(int j, double s, double len) {
  if (j == 0) return 1.0 / std::sqrt(len);
  return std::sqrt(12.0 / (len * len * len)) * (s - 0.5 * len);
}

double edge_moment_weight(ElementFamily f, int j, double s, double len) {
  if (f == ElementFamily::RT1) return 1.0;
  return edge_orthonormal(j, s, len);
}

DofMap::DofMap(const Mesh& mesh, ElementFamily family)
    : family_(family),
      dpe_(moments_per_edge(family)),
      n_flux_(moments_per_edge(family) * mesh.num_edges()),
      n_pressure_(mesh.num_cells()),
      n_edges_(mesh.num_edges()) {
  orient_.resize(3 * mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int le = 0; le < 3; ++le) {
      const int e = mesh.cell(c).edge[le];
      // +1 when the cell's outward normal coincides with the global edge
      // normal, i.e. the cell is the edge's plus side.
      orient_[3 * c + le] =
          dot(mesh.outward_normal(c, le), mesh.edge_normal(e)) > 0.0 ? 1 : -1;
    }
  }
  constrained_.assign(n_flux_, 0);
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (mesh.edge(e).tag == EdgeTag::NeumannBoundary)
      for (int j = 0; j < dpe_; ++j) constrained_[flux_dof(e, j)] = 1;
}

bool DofMap::matches(const Mesh& mesh) const {
  return n_edges_ == mesh.num_edges() && n_pressure_ == mesh.num_cells();
}

FluxBasis::FluxBasis(const Mesh& mesh, int cell, ElementFamily family) {
  const double area = mesh.cell_area(cell);
  if (!(area > 0.0)) throw std::invalid_argument("flux basis: degenerate cell");
  centroid_ = mesh.cell_centroid(cell);
  h_ = mesh.cell_diameter(cell);
  const int dpe = moments_per_edge(family);
  n_ = 3 * dpe;

  // Monomial frame in xi = (x - centroid)/h. RT1: (1,0), (0,1), xi.
  // BDM1: (1,0), (0,1), (xi1,0), (xi2,0), (0,xi1), (0,xi2).
  const auto mono = [&](int k, Vec2 xi) -> Vec2 {
    if (family == ElementFamily::RT1) {
      if (k == 0) return {1.0, 0.0};
      if (k == 1) return {0.0, 1.0};
      return xi;
    }
    switch (k) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {xi.x, 0.0};
      case 3: return {xi.y, 0.0};
      case 4: return {0.0, xi.x};
      default: return {0.0, xi.y};
    }
  };
  const auto mono_div = [&](int k) {
    if (family == ElementFamily::RT1) return k == 2 ? 2.0 / h_ : 0.0;
    return (k == 2 || k == 5) ? 1.0 / h_ : 0.0;
  };

  // Moment matrix: row (le, j) = \int_e (m_k . n_out) w_j dl with the arc
  // length of w_j measured from the lower-id endpoint of the edge.
  const EdgeRule& rule = edge_rule(3);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n_, n_);
  const Cell& cdata = mesh.cell(cell);
  for (int le = 0; le < 3; ++le) {
    const int e = cdata.edge[le];
    const Vec2 a = mesh.vertex_pos(mesh.edge(e).a);
    const Vec2 b = mesh.vertex_pos(mesh.edge(e).b);
    const double len = mesh.edge_length(e);
    const Vec2 n_out = mesh.outward_normal(cell, le);
    for (int q = 0; q < rule.size(); ++q) {
      const double t = rule.points()[q];
      const double w = rule.weights()[q] * len;
      const Vec2 x = a + t * (b - a);
      const Vec2 xi = (1.0 / h_) * (x - centroid_);
      for (int j = 0; j < dpe; ++j) {
        const double wj = edge_moment_weight(family, j, t * len, len);
        for (int k = 0; k < n_; ++k)
          M(le * dpe + j, k) += w * dot(mono(k, xi), n_out) * wj;
      }
    }
  }

  Eigen::MatrixXd C = M.fullPivLu().solve(Eigen::MatrixXd::Identity(n_, n_));
  for (int j = 0; j < n_; ++j) {
    double d = 0.0;
    for (int k = 0; k < n_; ++k) {
      coef_[j][k] = C(k, j);
      d += C(k, j) * mono_div(k);
    }
    div_[j] = d;
  }
  family_rt_ = (family == ElementFamily::RT1);
}

Vec2 FluxBasis::value(int j, Vec2 x) const {
  const Vec2 xi = (1.0 / h_) * (x - centroid_);
  if (family_rt_)
    return {coef_[j][0] + coef_[j][2] * xi.x, coef_[j][1] + coef_[j][2] * xi.y};
  return {coef_[j][0] + coef_[j][2] * xi.x + coef_[j][3] * xi.y,
          coef_[j][1] + coef_[j][4] * xi.x + coef_[j][5] * xi.y};
}

Vec2 FluxBasis::combine(std::span<const double> c, Vec2 x) const {
  Vec2 v{0.0, 0.0};
  for (int j = 0; j < n_; ++j) v = v + c[j] * value(j, x);
  return v;
}

std::array<double, 6> gather_flux(const Mesh& mesh, const DofMap& dofmap,
                                  std::span<const double> flux, int cell) {
  std::array<double, 6> local{};
  const int dpe = dofmap.dofs_per_edge();
  for (int le = 0; le < 3; ++le) {
    const int e = mesh.cell(cell).edge[le];
    const double sigma = dofmap.orientation(cell, le);
    for (int j = 0; j < dpe; ++j) local[le * dpe + j] = sigma * flux[dofmap.flux_dof(e, j)];
  }
  return local;
}

std::vector<double> interpolate_flux(const Mesh& mesh, const DofMap& dofmap,
                                     const std::function<Vec2(Vec2)>& field) {
  std::vector<double> dofs(dofmap.n_flux(), 0.0);
  const EdgeRule& rule = edge_rule(kDataDegree);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Vec2 a = mesh.vertex_pos(mesh.edge(e).a);
    const Vec2 b = mesh.vertex_pos(mesh.edge(e).b);
    const Vec2 n = mesh.edge_normal(e);
    const double len = mesh.edge_length(e);
    for (int q = 0; q < rule.size(); ++q) {
      const double t = rule.points()[q];
      const double w = rule.weights()[q] * len;
      const double fn = dot(field(a + t * (b - a)), n);
      for (int j = 0; j < dofmap.dofs_per_edge(); ++j)
        dofs[dofmap.flux_dof(e, j)] +=
            w * fn * edge_moment_weight(dofmap.family(), j, t * len, len);
    }
  }
  return dofs;
}

P2Basis::P2Basis(const Mesh& mesh, int cell) {
  const Cell& c = mesh.cell(cell);
  const Vec2 p0 = mesh.vertex_pos(c.v[0]);
  const Vec2 p1 = mesh.vertex_pos(c.v[1]);
  const Vec2 p2 = mesh.vertex_pos(c.v[2]);
  const double twice_area = cross(p1 - p0, p2 - p0);
  if (!(twice_area > 0.0)) throw std::invalid_argument("p2 basis: degenerate cell");
  // grad lambda_i points inward from the opposite edge: minus the outward
  // rotation of the CCW edge direction, scaled by 1/(2A).
  grad_lambda_[0] = (-1.0 / twice_area) * rot_cw(p2 - p1);
  grad_lambda_[1] = (-1.0 / twice_area) * rot_cw(p0 - p2);
  grad_lambda_[2] = (-1.0 / twice_area) * rot_cw(p1 - p0);
}

double P2Basis::value(int i, double l0, double l1, double l2) {
  const double l[3] = {l0, l1, l2};
  if (i < 3) return l[i] * (2.0 * l[i] - 1.0);
  // Midpoint nodes: 3 on (v0,v1), 4 on (v1,v2), 5 on (v2,v0).
  const int a = i - 3;
  return 4.0 * l[a] * l[(a + 1) % 3];
}

Vec2 P2Basis::gradient(int i, double l0, double l1, double l2) const {
  const double l[3] = {l0, l1, l2};
  if (i < 3) return (4.0 * l[i] - 1.0) * grad_lambda_[i];
  const int a = i - 3;
  const int b = (a + 1) % 3;
  return 4.0 * (l[b] * grad_lambda_[a] + l[a] * grad_lambda_[b]);
}

}  // namespace faultfem
