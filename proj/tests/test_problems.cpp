#include <doctest.h>

#include <cmath>
#include <numbers>

#include "faultfem/adapt.hpp"
#include "faultfem/quadrature.hpp"

using namespace faultfem;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> pseudo_random(std::size_t n, unsigned seed) {
  std::vector<double> v(n);
  unsigned state = seed;
  for (auto& x : v) {
    state = 1664525u * state + 1013904223u;
    x = static_cast<double>(state) / 4294967296.0;
  }
  return v;
}

// Five-point second differences: -(p_xx + p_yy).
double laplacian_fd(const std::function<double(Vec2)>& p, Vec2 x, double h) {
  const double pxx =
      (p({x.x + h, x.y}) - 2.0 * p(x) + p({x.x - h, x.y})) / (h * h);
  const double pyy =
      (p({x.x, x.y + h}) - 2.0 * p(x) + p({x.x, x.y - h})) / (h * h);
  return -(pxx + pyy);
}

double mean_abs_gamma_jump(const Mesh& mesh, const PostPressure& post) {
  const EdgeRule& rule = edge_rule(5);
  double sum = 0.0, len_total = 0.0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge(e).tag != EdgeTag::InterfaceGamma) continue;
    const double len = mesh.edge_length(e);
    for (int q = 0; q < rule.size(); ++q)
      sum += rule.weights()[q] * len *
             std::abs(postpressure_jump(mesh, post, e, rule.points()[q]));
    len_total += len;
  }
  return sum / len_total;
}

}  // namespace

TEST_SUITE("problems") {
  TEST_CASE("manufactured pressure point values") {
    const ProblemDefinition p = manufactured();
    // Middle branch at (1/4, 1/2): sin(3 pi / 8) * cos^2(0).
    CHECK(p.exact->pressure({0.25, 0.5}) ==
          doctest::Approx(std::sin(3.0 * kPi / 8.0)).epsilon(1e-15));
    CHECK(p.exact->pressure({0.25, 0.5}) == doctest::Approx(0.9238795).epsilon(1e-6));
    // Below the strip the solution vanishes identically.
    for (double x : {0.05, 0.3, 0.55, 0.9}) {
      CHECK(p.exact->pressure({x, 0.1}) == 0.0);
      CHECK(p.exact->pressure({x, 0.9}) == 0.0);
    }
    // Homogeneous Dirichlet data on the whole boundary.
    for (double t : {0.1, 0.5, 0.62}) {
      CHECK(std::abs(p.exact->pressure({0.0, t})) <= 1e-15);
      CHECK(std::abs(p.exact->pressure({1.0, t})) <= 1e-15);
      CHECK(std::abs(p.exact->pressure({t, 0.0})) <= 1e-15);
      CHECK(std::abs(p.exact->pressure({t, 1.0})) <= 1e-15);
    }
  }

  TEST_CASE("manufactured alpha is forced by the interface condition") {
    const ProblemDefinition p = manufactured();
    CHECK(p.data.alpha == doctest::Approx(4.0 / (3.0 * kPi)).epsilon(1e-15));
    const double eps = 1e-13;
    for (int i = 0; i < 20; ++i) {
      const double y = 0.25 + 0.5 * (i + 0.5) / 20.0;
      const double jump =
          p.exact->pressure({0.5 - eps, y}) - p.exact->pressure({0.5 + eps, y});
      const double un = p.exact->flux({0.5 - eps, y}).x;
      CHECK(p.data.alpha * un - jump == doctest::Approx(0.0).epsilon(1e-10));
      // Closed forms of the two traces.
      const double c2 = std::pow(std::cos(2.0 * kPi * (y - 0.5)), 2);
      CHECK(jump == doctest::Approx(std::sqrt(2.0) * c2).epsilon(1e-10));
      CHECK(un == doctest::Approx(0.75 * kPi * std::sqrt(2.0) * c2).epsilon(1e-10));
    }
  }

  TEST_CASE("manufactured source agrees with finite differences") {
    const ProblemDefinition p = manufactured();
    const auto xs = pseudo_random(100, 7);
    const auto ys = pseudo_random(100, 13);
    const double h = 1e-4;
    // Relative to the source's sup norm; f oscillates through zero, so
    // pointwise-relative comparison is meaningless at its roots.
    const double f_scale = 8.0 * kPi * kPi + 2.25 * kPi * kPi;
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
      // Keep clear of the region-switch lines so stencils stay one-sided.
      const double x = 0.02 + 0.96 * xs[i];
      const double y = 0.27 + 0.46 * ys[i];
      if (std::abs(x - 0.5) < 2.0 * h) continue;
      const double fd = laplacian_fd(p.exact->pressure, {x, y}, h);
      const double sym = p.data.source({x, y});
      CHECK(std::abs(fd - sym) <= 1e-6 * f_scale);
      ++checked;
    }
    CHECK(checked >= 90);
  }

  TEST_CASE("manufactured flux matches the negative pressure gradient") {
    const ProblemDefinition p = manufactured();
    const auto xs = pseudo_random(50, 21);
    const auto ys = pseudo_random(50, 34);
    const double h = 1e-6;
    for (int i = 0; i < 50; ++i) {
      const double x = 0.02 + 0.96 * xs[i];
      const double y = 0.27 + 0.46 * ys[i];
      if (std::abs(x - 0.5) < 2.0 * h) continue;
      const Vec2 u = p.exact->flux({x, y});
      const double gx = (p.exact->pressure({x + h, y}) - p.exact->pressure({x - h, y})) /
                        (2.0 * h);
      const double gy = (p.exact->pressure({x, y + h}) - p.exact->pressure({x, y - h})) /
                        (2.0 * h);
      CHECK(u.x == doctest::Approx(-gx).epsilon(1e-7));
      CHECK(u.y == doctest::Approx(-gy).epsilon(1e-7));
    }
  }

  TEST_CASE("manufactured flux is normally continuous across the regularity lines") {
    const ProblemDefinition p = manufactured();
    const double eps = 1e-12;
    for (double x : {0.1, 0.35, 0.62, 0.85}) {
      // Across y = 1/4 and y = 3/4 the normal is vertical; u_y vanishes.
      CHECK(std::abs(p.exact->flux({x, 0.25 + eps}).y) <= 1e-10);
      CHECK(std::abs(p.exact->flux({x, 0.75 - eps}).y) <= 1e-10);
      CHECK(p.exact->flux({x, 0.25 - eps}).y == 0.0);
    }
    for (double y : {0.3, 0.5, 0.7}) {
      const double left = p.exact->flux({0.5 - eps, y}).x;
      const double right = p.exact->flux({0.5 + eps, y}).x;
      CHECK(left == doctest::Approx(right).epsilon(1e-10));
    }
  }

  TEST_CASE("linear fault satisfies its interface condition identically") {
    const ProblemDefinition p = linear_fault(2.5);
    CHECK(p.geometry.gamma_y0 == 0.0);
    CHECK(p.geometry.gamma_y1 == 1.0);
    for (double y : {0.05, 0.4, 0.96}) {
      const double jump =
          p.exact->pressure({0.5 - 1e-13, y}) - p.exact->pressure({0.5 + 1e-13, y});
      CHECK(jump == doctest::Approx(2.5).epsilon(1e-12));
    }
    CHECK(p.data.source({0.3, 0.3}) == 0.0);
    CHECK(p.data.source({0.8, 0.9}) == 0.0);
  }

  TEST_CASE("fault flow data") {
    for (double alpha : {0.1, 10.0, 100.0}) {
      const ProblemDefinition p = fault_flow(alpha);
      CHECK(p.data.alpha == alpha);
      CHECK_FALSE(p.exact.has_value());
      CHECK(p.data.source({0.3, 0.8}) == 1.0);
      CHECK(p.data.neumann({0.5, 0.0}) == 0.0);
      CHECK(p.data.dirichlet({0.0, 0.4}) == 0.0);
      CHECK(p.data.dirichlet({1.0, 0.4}) == -1.0);
      CHECK(p.geometry.layout == BoundaryLayout::TopBottomNeumann);
    }
    CHECK_THROWS_AS(fault_flow(0.0), std::invalid_argument);
    CHECK_THROWS_AS(linear_fault(-1.0), std::invalid_argument);
  }

  TEST_CASE("error norms vanish for the interpolated exact solution") {
    const ProblemDefinition problem = linear_fault(1.0);
    const Mesh mesh = Mesh::structured(8, problem.geometry);
    const DofMap dofmap(mesh, ElementFamily::BDM1);
    DiscreteSolution sol;
    const std::vector<double> dofs = interpolate_flux(mesh, dofmap, problem.exact->flux);
    sol.flux = Eigen::Map<const Eigen::VectorXd>(dofs.data(), dofs.size());
    sol.cell_pressure.resize(mesh.num_cells());
    for (int c = 0; c < mesh.num_cells(); ++c)
      sol.cell_pressure[c] =
          integrate(mesh, c, triangle_rule(8), problem.exact->pressure) / mesh.cell_area(c);
    const PostPressure post = postprocess(mesh, dofmap, sol);
    const ErrorNorms norms = error_norms(mesh, dofmap, sol, post, problem);
    CHECK(norms.flux_l2 <= 1e-12);
    CHECK(norms.postpressure_l2 <= 1e-12);
    CHECK(norms.tnorm <= 1e-12);
  }

  TEST_CASE("solved linear fault has vanishing triple-norm error") {
    const ProblemDefinition problem = linear_fault(4.0 / (3.0 * kPi));
    const Mesh mesh = Mesh::structured(8, problem.geometry);
    const DofMap dofmap(mesh, ElementFamily::BDM1);
    const DiscreteSolution sol = solve(assemble(mesh, dofmap, problem.data));
    const PostPressure post = postprocess(mesh, dofmap, sol);
    const ErrorNorms norms = error_norms(mesh, dofmap, sol, post, problem);
    CHECK(norms.tnorm <= 1e-9);
  }

  TEST_CASE("error_norms requires an exact solution") {
    const ProblemDefinition problem = fault_flow(10.0);
    const Mesh mesh = Mesh::structured(8, problem.geometry);
    const DofMap dofmap(mesh, ElementFamily::RT1);
    const DiscreteSolution sol = solve(assemble(mesh, dofmap, problem.data));
    const PostPressure post = postprocess(mesh, dofmap, sol);
    CHECK_THROWS_AS(error_norms(mesh, dofmap, sol, post, problem), std::invalid_argument);
  }

  TEST_CASE("net outflux balances the unit source") {
    const ProblemDefinition problem = fault_flow(10.0);
    const Mesh mesh = Mesh::structured(8, problem.geometry);
    const DofMap dofmap(mesh, ElementFamily::BDM1);
    const DiscreteSolution sol = solve(assemble(mesh, dofmap, problem.data));
    double total_div = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c)
      total_div += flux_divergence(mesh, dofmap, sol, c) * mesh.cell_area(c);
    CHECK(total_div == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("fault pressure jump grows with alpha") {
    // Coarse ordering of mean |[p_h*]| over the fault after a few adaptive steps.
    double jumps[2];
    int k = 0;
    for (double alpha : {0.1, 100.0}) {
      const ProblemDefinition problem = fault_flow(alpha);
      Mesh mesh = Mesh::structured(8, problem.geometry);
      for (int iter = 0;; ++iter) {
        const DofMap dofmap(mesh, ElementFamily::BDM1);
        const DiscreteSolution sol = solve(assemble(mesh, dofmap, problem.data));
        const PostPressure post = postprocess(mesh, dofmap, sol);
        if (iter == 3) {
          jumps[k++] = mean_abs_gamma_jump(mesh, post);
          break;
        }
        const EstimatorReport report =
            estimate(mesh, dofmap, sol, post, problem.data.alpha, problem.data.source);
        mesh = mesh.refine(mark(report, mesh, 0.5));
      }
    }
    CHECK(jumps[1] > jumps[0]);
  }

  TEST_CASE("flux error drops fourfold per uniform halving") {
    const ProblemDefinition problem = manufactured();
    double prev = 0.0;
    for (int n : {8, 16, 32}) {
      const Mesh mesh = Mesh::structured(n, problem.geometry);
      const DofMap dofmap(mesh, ElementFamily::BDM1);
      const DiscreteSolution sol = solve(assemble(mesh, dofmap, problem.data));
      const PostPressure post = postprocess(mesh, dofmap, sol);
      const double err = error_norms(mesh, dofmap, sol, post, problem).flux_l2;
      if (prev > 0.0) {
        CHECK(prev / err > 3.2);
        CHECK(prev / err < 4.8);
      }
      prev = err;
    }
  }
}
