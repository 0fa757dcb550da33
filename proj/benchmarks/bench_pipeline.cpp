#include <benchmark/benchmark.h>

#include "faultfem/adapt.hpp"

using namespace faultfem;

namespace {

Mesh make_mesh(int n) { return Mesh::structured(n, ProblemGeometry::problem1()); }

void BM_Assemble(benchmark::State& state) {
  const auto family = state.range(1) ? ElementFamily::BDM1 : ElementFamily::RT1;
  const Mesh mesh = make_mesh(static_cast<int>(state.range(0)));
  const DofMap dofmap(mesh, family);
  const ProblemDefinition problem = manufactured();
  for (auto _ : state) {
    LinearSystem sys = assemble(mesh, dofmap, problem.data);
    benchmark::DoNotOptimize(sys.rhs.data());
  }
  state.counters["dofs"] = dofmap.n_total();
}
BENCHMARK(BM_Assemble)->Args({16, 0})->Args({16, 1})->Args({32, 1})->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const Mesh mesh = make_mesh(static_cast<int>(state.range(0)));
  const DofMap dofmap(mesh, ElementFamily::BDM1);
  const ProblemDefinition problem = manufactured();
  const LinearSystem sys = assemble(mesh, dofmap, problem.data);
  for (auto _ : state) {
    DiscreteSolution sol = solve(sys);
    benchmark::DoNotOptimize(sol.flux.data());
  }
  state.counters["dofs"] = dofmap.n_total();
}
BENCHMARK(BM_Solve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_EstimatorPass(benchmark::State& state) {
  const Mesh mesh = make_mesh(static_cast<int>(state.range(0)));
  const DofMap dofmap(mesh, ElementFamily::BDM1);
  const ProblemDefinition problem = manufactured();
  const DiscreteSolution sol = solve(assemble(mesh, dofmap, problem.data));
  const PostPressure post = postprocess(mesh, dofmap, sol);
  for (auto _ : state) {
    EstimatorReport report =
        estimate(mesh, dofmap, sol, post, problem.data.alpha, problem.data.source);
    benchmark::DoNotOptimize(report.eta_total);
  }
}
BENCHMARK(BM_EstimatorPass)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_RefineAll(benchmark::State& state) {
  const Mesh mesh = make_mesh(static_cast<int>(state.range(0)));
  std::vector<int> all(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) all[c] = c;
  for (auto _ : state) {
    Mesh fine = mesh.refine(all);
    benchmark::DoNotOptimize(fine.num_cells());
  }
}
BENCHMARK(BM_RefineAll)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
