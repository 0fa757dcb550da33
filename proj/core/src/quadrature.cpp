#include "faultfem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace faultfem {

namespace {

constexpr int kMaxDegree = 10;

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on the Legendre
// recurrence, then mapped to [0,1]. n points are exact up to degree 2n-1.
void gauss_legendre_unit(int n, std::vector<double>& pts, std::vector<double>& wts) {
  pts.resize(n);
  wts.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));  // Chebyshev initial guess
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double pn = (n == 1) ? x : p1;
      double pn1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    pts[i] = 0.5 * (1.0 + x);
    wts[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/((1-x^2) P'^2) scaled by 1/2
  }
}

EdgeRule make_edge_rule(int degree) {
  const int n = degree / 2 + 1;  // 2n-1 >= degree
  std::vector<double> pts, wts;
  gauss_legendre_unit(n, pts, wts);
  return EdgeRule(degree, std::move(pts), std::move(wts));
}

TriangleRule make_triangle_rule(int degree) {
  std::vector<BarycentricPoint> pts;
  std::vector<double> wts;
  if (degree == 1) {
    pts.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    wts.push_back(0.5);
  } else if (degree == 2) {
    // Symmetric interior 3-point rule.
    const double a = 2.0 / 3.0, b = 1.0 / 6.0;
    pts.push_back({a, b, b});
    pts.push_back({b, a, b});
    pts.push_back({b, b, a});
    wts.assign(3, 1.0 / 6.0);
  } else {
    // Collapsed tensor product: (u,v) in [0,1]^2 -> (x,y) = (u(1-v), v),
    // Jacobian (1-v). Exact for degree d with ceil((d+2)/2) Gauss points
    // per direction.
    const int n = (degree + 2 + 1) / 2;
    std::vector<double> gp, gw;
    gauss_legendre_unit(n, gp, gw);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double x = gp[i] * (1.0 - gp[j]);
        const double y = gp[j];
        pts.push_back({1.0 - x - y, x, y});
        wts.push_back(gw[i] * gw[j] * (1.0 - gp[j]));
      }
    }
  }
  return TriangleRule(degree, std::move(pts), std::move(wts));
}

void check_degree(int degree) {
  if (degree < 1 || degree > kMaxDegree)
    throw std::invalid_argument("quadrature degree must be in 1..10, got " +
                                std::to_string(degree));
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
  check_degree(degree);
  static const auto rules = [] {
    std::vector<TriangleRule> r;
    for (int d = 1; d <= kMaxDegree; ++d) r.push_back(make_triangle_rule(d));
    return r;
  }();
  return rules[degree - 1];
}

const EdgeRule& edge_rule(int degree) {
  check_degree(degree);
  static const auto rules = [] {
    std::vector<EdgeRule> r;
    for (int d = 1; d <= kMaxDegree; ++d) r.push_back(make_edge_rule(d));
    return r;
  }();
  return rules[degree - 1];
}

}  // namespace faultfem
