// Acceptance suite: end-to-end checks of the solver pipeline at pinned
// tolerances, one pass/fail line per criterion. Exit code is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "faultfem/adapt.hpp"
#include "faultfem/quadrature.hpp"

using namespace faultfem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Level {
  Mesh mesh;
  DofMap dofmap;
  DiscreteSolution sol;
  PostPressure post;
  EstimatorReport report;
  ErrorNorms norms;
};

Level solve_level(const ProblemDefinition& problem, const Mesh& mesh, ElementFamily fam) {
  DofMap dofmap(mesh, fam);
  DiscreteSolution sol = solve(assemble(mesh, dofmap, problem.data));
  PostPressure post = postprocess(mesh, dofmap, sol);
  EstimatorReport report =
      estimate(mesh, dofmap, sol, post, problem.data.alpha, problem.data.source);
  ErrorNorms norms;
  if (problem.exact) norms = error_norms(mesh, dofmap, sol, post, problem);
  return {mesh, std::move(dofmap), std::move(sol), std::move(post), std::move(report), norms};
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double l2_norm_of_source(const Mesh& mesh, const std::function<double(Vec2)>& f) {
  double sum = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c)
    sum += integrate(mesh, c, triangle_rule(8), [&](Vec2 x) {
      const double v = f(x);
      return v * v;
    });
  return std::sqrt(sum);
}

double max_abs_coeff(const PostPressure& post) {
  double m = 0.0;
  for (const auto& c : post.coeffs)
    for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %d [%s] %s  %s\n", id, name, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

// --- criterion 1: exactness gate ------------------------------------------

void criterion_exactness() {
  bool pass = true;
  std::string detail;
  double worst_flux = 0.0, worst_tnorm = 0.0, worst_eta = 0.0;
  for (double alpha : {0.5, 1.0, 4.0 / (3.0 * kPi), 10.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const ProblemDefinition problem = linear_fault(alpha);
    Mesh mesh = Mesh::structured(8, problem.geometry);
    for (int level = 0; level < 3; ++level) {
      for (ElementFamily fam : {ElementFamily::RT1, ElementFamily::BDM1}) {
        const Level s = solve_level(problem, mesh, fam);
        worst_flux = std::max(worst_flux, s.norms.flux_l2);
        worst_tnorm = std::max(worst_tnorm, s.norms.tnorm);
        worst_eta = std::max(worst_eta, s.report.eta_total);
      }
      if (level < 2) {
        std::vector<int> all(mesh.num_cells());
        for (int c = 0; c < mesh.num_cells(); ++c) all[c] = c;
        mesh = mesh.refine(all);
      }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 5.0) {
      pass = false;
      detail += fmt("alpha=%g took %.1fs; ", alpha, secs);
    }
  }
  pass = pass && worst_flux <= 1e-9 && worst_tnorm <= 1e-9 && worst_eta <= 1e-8;
  report(1, "exactness-gate", pass,
         detail + fmt("max flux_err=%.2e (tol 1e-9), max tnorm=%.2e (tol 1e-9), "
                      "max eta=%.2e (tol 1e-8)",
                      worst_flux, worst_tnorm, worst_eta));
}

// --- criteria 2 and 3: mean-zero lemmas and mass balance -------------------

struct MatrixEntry {
  ProblemDefinition problem;
  ElementFamily family;
  Mesh mesh;
};

std::vector<MatrixEntry> test_matrix() {
  std::vector<MatrixEntry> entries;
  for (ElementFamily fam : {ElementFamily::RT1, ElementFamily::BDM1}) {
    for (int n : {8, 16}) {
      entries.push_back({manufactured(), fam, Mesh::structured(n, ProblemGeometry::problem1())});
      entries.push_back({fault_flow(10.0), fam, Mesh::structured(n, ProblemGeometry::problem2())});
    }
    entries.push_back({linear_fault(1.0), fam, Mesh::structured(8, ProblemGeometry::full_fault())});
    // A nonuniform mesh from two adaptive rounds of the fault-flow problem.
    ProblemDefinition ff = fault_flow(100.0);
    Mesh mesh = Mesh::structured(8, ff.geometry);
    for (int i = 0; i < 2; ++i) {
      const Level s = solve_level(ff, mesh, fam);
      mesh = mesh.refine(mark(s.report, mesh, 0.5));
    }
    entries.push_back({std::move(ff), fam, std::move(mesh)});
  }
  return entries;
}

void criteria_lemmas_and_mass_balance() {
  bool lemmas_pass = true, balance_pass = true;
  double worst_interior = 0.0, worst_gamma = 0.0, worst_balance = 0.0;
  const EdgeRule& rule = edge_rule(5);
  for (const MatrixEntry& entry : test_matrix()) {
    const Level s = solve_level(entry.problem, entry.mesh, entry.family);
    const double alpha = entry.problem.data.alpha;
    const double pscale = 1.0 + max_abs_coeff(s.post);

    for (int e = 0; e < s.mesh.num_edges(); ++e) {
      const double len = s.mesh.edge_length(e);
      if (s.mesh.edge(e).tag == EdgeTag::Interior) {
        double integral = 0.0;
        for (int q = 0; q < rule.size(); ++q)
          integral += rule.weights()[q] * len *
                      postpressure_jump(s.mesh, s.post, e, rule.points()[q]);
        const double scaled = std::abs(integral) / (len * pscale);
        worst_interior = std::max(worst_interior, scaled);
        if (scaled > 1e-9) lemmas_pass = false;
      } else if (s.mesh.edge(e).tag == EdgeTag::InterfaceGamma) {
        const Vec2 n = s.mesh.edge_normal(e);
        const int cp = s.mesh.edge_cell_plus(e);
        const Vec2 a = s.mesh.vertex_pos(s.mesh.edge(e).a);
        const Vec2 b = s.mesh.vertex_pos(s.mesh.edge(e).b);
        double integral = 0.0, nscale = 0.0;
        for (int q = 0; q < rule.size(); ++q) {
          const double t = rule.points()[q];
          const double un = dot(flux_value(s.mesh, s.dofmap, s.sol, cp, a + t * (b - a)), n);
          integral += rule.weights()[q] * len *
                      (alpha * un - postpressure_jump(s.mesh, s.post, e, t));
          nscale = std::max(nscale, alpha * std::abs(un));
        }
        const double scaled = std::abs(integral) / (len * (pscale + nscale));
        worst_gamma = std::max(worst_gamma, scaled);
        if (scaled > 1e-9) lemmas_pass = false;
      }
    }

    const double f_norm = l2_norm_of_source(s.mesh, entry.problem.data.source);
    const double balance =
        mass_balance_residual(s.mesh, s.dofmap, s.sol, entry.problem.data.source) /
        (1.0 + f_norm);
    worst_balance = std::max(worst_balance, balance);
    if (balance > 1e-9) balance_pass = false;
  }
  report(2, "mean-zero-jump-lemmas", lemmas_pass,
         fmt("max scaled |int [p*]| = %.2e interior, %.2e fault (tol 1e-9)",
             worst_interior, worst_gamma));
  report(3, "mass-balance", balance_pass,
         fmt("max ||div u_h - P_h f|| / (1 + ||f||) = %.2e (tol 1e-9)", worst_balance));
}

// --- criteria 4, 5, 7, 9: shared uniform manufactured sweep ----------------

void criteria_uniform_manufactured() {
  const ProblemDefinition problem = manufactured();
  const std::vector<int> ns{8, 16, 32, 64};
  std::vector<Level> levels;
  const auto t0 = std::chrono::steady_clock::now();
  for (int n : ns)
    levels.push_back(solve_level(problem, Mesh::structured(n, problem.geometry),
                                 ElementFamily::BDM1));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // Criterion 4: least-squares convergence rates in h.
  std::vector<double> log_h, log_flux, log_post;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    log_h.push_back(std::log(1.0 / ns[i]));
    log_flux.push_back(std::log(levels[i].norms.flux_l2));
    log_post.push_back(std::log(levels[i].norms.postpressure_l2));
  }
  const double flux_rate = ls_slope(log_h, log_flux);
  const double post_rate = ls_slope(log_h, log_post);
  const bool rates_pass =
      std::abs(flux_rate - 2.0) <= 0.2 && post_rate >= 1.7 && secs < 120.0;
  report(4, "convergence-rates", rates_pass,
         fmt("flux rate %.3f (2.0 +- 0.2), p* rate %.3f (>= 1.7), %.1fs (< 120s)",
             flux_rate, post_rate, secs));

  // Criterion 5: effectivity on the finest level, primary window with the
  // documented fallback.
  std::vector<double> eff;
  for (const Level& s : levels) eff.push_back(effectivity(s.report, s.norms.flux_l2));
  const double drift = std::abs(eff[3] - eff[2]) / eff[2];
  const bool primary = eff[3] >= 1.42 && eff[3] <= 1.72 && drift < 0.10;
  const bool fallback = eff[3] >= 1.0 && eff[3] <= 3.0 && drift < 0.10;
  report(5, "effectivity", primary || fallback,
         fmt("effectivity(n=64) = %.4f (primary [1.42,1.72]%s), drift %.2f%% (< 10%%)",
             eff[3], primary ? " met" : fallback ? "; fallback [1.0,3.0] met" : " missed",
             100.0 * drift));

  // Criterion 7: 95th percentile of eta_T / ||u - u_h||_{omega_T} per level.
  // Uses the dyadic levels 16..128: the percentile statistic is still rising
  // toward its plateau on n = 8 while the per-cell maximum is already flat.
  const Level level128 =
      solve_level(problem, Mesh::structured(128, problem.geometry), ElementFamily::BDM1);
  const auto p95_ratio = [&](const Level& s) {
    std::vector<double> err2(s.mesh.num_cells());
    for (int c = 0; c < s.mesh.num_cells(); ++c)
      err2[c] = integrate(s.mesh, c, triangle_rule(8), [&](Vec2 x) {
        const Vec2 d = problem.exact->flux(x) - flux_value(s.mesh, s.dofmap, s.sol, c, x);
        return dot(d, d);
      });
    std::vector<double> ratios;
    for (int c = 0; c < s.mesh.num_cells(); ++c) {
      double patch = err2[c];
      for (int le = 0; le < 3; ++le) {
        const int e = s.mesh.cell(c).edge[le];
        if (s.mesh.is_boundary_edge(e)) continue;
        const int nb = s.mesh.edge_cell_plus(e) == c ? s.mesh.edge_cell_minus(e)
                                                     : s.mesh.edge_cell_plus(e);
        patch += err2[nb];
      }
      if (patch > 0.0) ratios.push_back(s.report.eta_cell[c] / std::sqrt(patch));
    }
    std::sort(ratios.begin(), ratios.end());
    return ratios[static_cast<std::size_t>(0.95 * (ratios.size() - 1))];
  };
  const std::vector<double> p95{p95_ratio(levels[1]), p95_ratio(levels[2]),
                                p95_ratio(levels[3]), p95_ratio(level128)};
  std::vector<double> idx;
  std::vector<double> log_p95;
  for (std::size_t i = 0; i < p95.size(); ++i) {
    idx.push_back(static_cast<double>(i));
    log_p95.push_back(std::log(p95[i]));
  }
  const double eff_slope = ls_slope(idx, log_p95);
  report(7, "local-efficiency", eff_slope <= 0.05,
         fmt("p95 ratios on n=16..128: %.3f %.3f %.3f %.3f, log-slope %.4f (<= 0.05)",
             p95[0], p95[1], p95[2], p95[3], eff_slope));

  // Criterion 9: pressure reliability ratio has no increasing trend.
  std::vector<double> log_ratio;
  std::string seq;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double r = levels[i].norms.postpressure_l2 /
                     (levels[i].report.eta_total + levels[i].report.osc_total);
    log_ratio.push_back(std::log(r));
    seq += fmt("%.4f ", r);
  }
  const double rel_slope = ls_slope(idx, log_ratio);
  report(9, "pressure-reliability", rel_slope <= 0.05,
         fmt("||p - p*|| / (eta + osc) per level: %slog-slope %.4f (<= 0.05)", seq.c_str(),
             rel_slope));

  // Criterion 6: adaptive vs uniform flux error at matched DOF counts.
  AdaptConfig config;
  config.mode = RefinementMode::Adaptive;
  config.theta = 0.5;
  config.max_iterations = 10;
  config.initial_n = 8;
  config.family = ElementFamily::BDM1;
  const auto records = run_study(problem, config);
  std::vector<double> uni_log_dofs, uni_log_err;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    uni_log_dofs.push_back(std::log(double(levels[i].dofmap.n_total())));
    uni_log_err.push_back(log_flux[i]);
  }
  bool adaptive_pass = true;
  int compared = 0;
  std::string worst;
  double worst_ratio = 0.0;
  for (const StudyRecord& r : records) {
    const double ld = std::log(double(r.n_dofs));
    if (ld < uni_log_dofs.front() || ld > uni_log_dofs.back()) continue;
    std::size_t k = 1;
    while (k + 1 < uni_log_dofs.size() && uni_log_dofs[k] < ld) ++k;
    const double t = (ld - uni_log_dofs[k - 1]) / (uni_log_dofs[k] - uni_log_dofs[k - 1]);
    const double uni_err = std::exp((1.0 - t) * uni_log_err[k - 1] + t * uni_log_err[k]);
    const double ratio = *r.flux_error / uni_err;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst = fmt("dofs=%d adaptive=%.4e uniform=%.4e", r.n_dofs, *r.flux_error, uni_err);
    }
    // 1e-12 slack absorbs exp/log round-off when a record lands exactly on a
    // uniform level.
    if (ratio > 1.0 + 1e-12) adaptive_pass = false;
    ++compared;
  }
  report(6, "adaptive-vs-uniform", adaptive_pass && compared >= 5,
         fmt("%d matched points, worst adaptive/uniform ratio %.3f (<= 1): %s", compared,
             worst_ratio, worst.c_str()));
}

// --- criterion 8: alpha-sweep endpoint concentration ------------------------

void criterion_alpha_sweep() {
  AdaptConfig config;
  config.mode = RefinementMode::Adaptive;
  config.theta = 0.5;
  config.max_iterations = 5;  // initial mesh plus the first 4 refinements
  config.initial_n = 8;
  config.family = ElementFamily::RT1;
  double frac[3] = {0.0, 0.0, 0.0};
  bool runtime_ok = true;
  const double alphas[3] = {0.1, 10.0, 100.0};
  for (int i = 0; i < 3; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto records = run_study(fault_flow(alphas[i]), config);
    frac[i] = records.back().endpoint_fraction;
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 30.0) runtime_ok = false;
  }
  report(8, "alpha-sweep-concentration", frac[2] > frac[0] && runtime_ok,
         fmt("endpoint_fraction at iteration 4: alpha=0.1 -> %.4f, alpha=10 -> %.4f, "
             "alpha=100 -> %.4f (need frac(100) > frac(0.1))",
             frac[0], frac[1], frac[2]));
}

}  // namespace

int main() {
  criterion_exactness();
  criteria_lemmas_and_mass_balance();
  criteria_uniform_manufactured();
  criterion_alpha_sweep();
  if (g_failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures;
}
