#include "faultfem/postprocess.hpp"

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>

#include "faultfem/quadrature.hpp"

namespace faultfem {

double PostPressure::value(int cell, double l0, double l1, double l2) const {
  double v = 0.0;
  for (int i = 0; i < 6; ++i) v += coeffs[cell][i] * P2Basis::value(i, l0, l1, l2);
  return v;
}

Vec2 PostPressure::gradient(const Mesh& mesh, int cell, double l0, double l1,
                            double l2) const {
  const P2Basis p2(mesh, cell);
  Vec2 g{0.0, 0.0};
  for (int i = 0; i < 6; ++i) g = g + coeffs[cell][i] * p2.gradient(i, l0, l1, l2);
  return g;
}

PostPressure postprocess(const Mesh& mesh, const DofMap& dofmap, const DiscreteSolution& sol) {
  if (!dofmap.matches(mesh))
    throw std::invalid_argument("postprocess: dofmap was built for a different mesh");

  PostPressure post;
  post.coeffs.resize(mesh.num_cells());
  const TriangleRule& rule = triangle_rule(kAssemblyDegree);
  const std::span<const double> flux(sol.flux.data(), static_cast<std::size_t>(sol.flux.size()));

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double area = mesh.cell_area(c);
    const P2Basis p2(mesh, c);
    const FluxBasis basis(mesh, c, dofmap.family());
    const auto local = gather_flux(mesh, dofmap, flux, c);

    // Saddle system: gradient recovery rows plus one mean-value multiplier.
    //   (grad p*, grad N_i)_T + mu (N_i, 1)_T = -(u_h, grad N_i)_T
    //   (p*, 1)_T = p_h |T|
    Eigen::Matrix<double, 7, 7> K = Eigen::Matrix<double, 7, 7>::Zero();
    Eigen::Matrix<double, 7, 1> b = Eigen::Matrix<double, 7, 1>::Zero();
    for (int q = 0; q < rule.size(); ++q) {
      const auto& bp = rule.points()[q];
      const double w = rule.weights()[q] * 2.0 * area;
      const Vec2 x = mesh.point(c, bp.l0, bp.l1, bp.l2);
      const Vec2 uh = basis.combine(std::span<const double>(local.data(), basis.size()), x);
      Vec2 grad[6];
      for (int i = 0; i < 6; ++i) grad[i] = p2.gradient(i, bp.l0, bp.l1, bp.l2);
      for (int i = 0; i < 6; ++i) {
        for (int j = i; j < 6; ++j) K(i, j) += w * dot(grad[i], grad[j]);
        const double ni = P2Basis::value(i, bp.l0, bp.l1, bp.l2);
        K(i, 6) += w * ni;
        b(i) -= w * dot(uh, grad[i]);
      }
    }
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < i; ++j) K(i, j) = K(j, i);
    for (int i = 0; i < 6; ++i) K(6, i) = K(i, 6);
    b(6) = sol.cell_pressure[c] * area;

    const Eigen::FullPivLU<Eigen::Matrix<double, 7, 7>> lu(K);
    const Eigen::Matrix<double, 7, 1> x = lu.solve(b);
    const double scale = std::max(1.0, b.norm());
    if (!((K * x - b).norm() <= 1e-12 * scale))
      throw std::runtime_error("postprocess: local solve residual above tolerance on cell " +
                               std::to_string(c));

    // K is symmetric; its singular values are the eigenvalue magnitudes.
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 7, 7>> es(K);
    double smin = std::numeric_limits<double>::infinity(), smax = 0.0;
    for (int i = 0; i < 7; ++i) {
      smin = std::min(smin, std::abs(es.eigenvalues()(i)));
      smax = std::max(smax, std::abs(es.eigenvalues()(i)));
    }
    if (smin > 0.0) post.max_condition = std::max(post.max_condition, smax / smin);

    for (int i = 0; i < 6; ++i) post.coeffs[c][i] = x(i);
  }
  return post;
}

}  // namespace faultfem
