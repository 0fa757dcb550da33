#pragma once

#include <span>
#include <vector>

#include "faultfem/mesh.hpp"

namespace faultfem {

struct BarycentricPoint {
  double l0, l1, l2;
};

/// Quadrature on the reference triangle {x,y >= 0, x+y <= 1}; weights sum to
/// 1/2 and the rule is exact for all polynomials up to degree().
class TriangleRule {
 public:
  TriangleRule(int degree, std::vector<BarycentricPoint> points, std::vector<double> weights)
      : degree_(degree), points_(std::move(points)), weights_(std::move(weights)) {}

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(points_.size()); }
  std::span<const BarycentricPoint> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }

 private:
  int degree_;
  std::vector<BarycentricPoint> points_;
  std::vector<double> weights_;
};

/// Gauss rule on [0,1]; weights sum to 1, exact up to degree().
class EdgeRule {
 public:
  EdgeRule(int degree, std::vector<double> points, std::vector<double> weights)
      : degree_(degree), points_(std::move(points)), weights_(std::move(weights)) {}

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(points_.size()); }
  std::span<const double> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }

 private:
  int degree_;
  std::vector<double> points_;
  std::vector<double> weights_;
};

/// Shared immutable rules, degree in 1..10. Throws std::invalid_argument
/// outside that range.
const TriangleRule& triangle_rule(int degree);
const EdgeRule& edge_rule(int degree);

// Quadrature degrees used throughout: assembled bilinear forms are products of
// at most quadratic polynomials, data/error integrals against the trigonometric
// manufactured solution want quadrature error well below discretization error.
inline constexpr int kAssemblyDegree = 4;
inline constexpr int kDataDegree = 8;

/// Integral of f(Vec2) over physical cell c.
template <class F>
double integrate(const Mesh& mesh, int c, const TriangleRule& rule, F&& f) {
  const double jac = 2.0 * mesh.cell_area(c);
  double sum = 0.0;
  auto pts = rule.points();
  auto wts = rule.weights();
  for (int q = 0; q < rule.size(); ++q)
    sum += wts[q] * f(mesh.point(c, pts[q].l0, pts[q].l1, pts[q].l2));
  return jac * sum;
}

/// Integral of f(Vec2) over physical edge e (arc length from the lower-id end).
template <class F>
double integrate_edge(const Mesh& mesh, int e, const EdgeRule& rule, F&& f) {
  const Vec2 a = mesh.vertex_pos(mesh.edge(e).a);
  const Vec2 b = mesh.vertex_pos(mesh.edge(e).b);
  const double len = mesh.edge_length(e);
  double sum = 0.0;
  auto pts = rule.points();
  auto wts = rule.weights();
  for (int q = 0; q < rule.size(); ++q) sum += wts[q] * f(a + pts[q] * (b - a));
  return len * sum;
}

}  // namespace faultfem
