#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <variant>

#include "graphvortex/generators.hpp"
#include "graphvortex/linear_ops.hpp"
#include "graphvortex/vortex_solver.hpp"

using namespace graphvortex;

namespace {

// side×side grid with the measure scaled so that 4π = ratio·|V|.
WeightedGraph scaled_grid(std::size_t side, double ratio) {
  const double n = static_cast<double>(side * side);
  return build({.kind = GraphKind::grid2d,
                .rows = side,
                .cols = side,
                .measure = 4.0 * std::numbers::pi / (ratio * n)});
}

VertexFunction wave(const WeightedGraph& g) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::sin(0.37 * static_cast<double>(i));
  return VertexFunction(g, std::move(v));
}

void BM_Laplacian(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto g = build({.kind = GraphKind::grid2d, .rows = side, .cols = side});
  const auto u = wave(g);
  for (auto _ : state)
    benchmark::DoNotOptimize(laplacian(g, u));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(g.size()));
}
BENCHMARK(BM_Laplacian)->Arg(10)->Arg(50)->Arg(200);

void BM_ShiftedSolve(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto g = build({.kind = GraphKind::grid2d, .rows = side, .cols = side});
  LinearSolveSettings s;
  s.method = state.range(1) == 0 ? LinearMethod::direct : LinearMethod::conjugate_gradient;
  const ShiftedSolver solver(g, VertexFunction(g, 2.0), s);
  const auto rhs = wave(g);
  for (auto _ : state)
    benchmark::DoNotOptimize(solver.solve(rhs));
}
BENCHMARK(BM_ShiftedSolve)
    ->Args({10, 0})
    ->Args({10, 1})
    ->Args({20, 0})
    ->Args({20, 1})
    ->Args({50, 1})
    ->Unit(benchmark::kMicrosecond);

void BM_Poisson(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto g = build({.kind = GraphKind::grid2d, .rows = side, .cols = side});
  auto f = wave(g);
  f = f - integrate(g, f) / g.total_volume();
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_poisson(g, f));
}
BENCHMARK(BM_Poisson)->Arg(10)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_FullSolve(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto g = scaled_grid(side, 0.5);
  const VortexConfig vc(g, std::vector<Vortex>{{g.size() / 2 + side / 2, 1}});
  std::size_t iterations = 0;
  for (auto _ : state) {
    const auto out = solve(g, vc);
    iterations = std::get<SolveReport>(out).trace.iterations;
    benchmark::DoNotOptimize(out);
  }
  state.counters["monotone_steps"] = static_cast<double>(iterations);
}
BENCHMARK(BM_FullSolve)->Arg(5)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_NewtonOracle(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto g = scaled_grid(side, 0.5);
  const VortexConfig vc(g, std::vector<Vortex>{{0, 1}});
  const SolverSettings s;
  const auto f = source_function(g, s);
  const auto u0 = background_potential(g, vc, f, s);
  for (auto _ : state)
    benchmark::DoNotOptimize(newton_oracle(g, u0, f, 1, s));
}
BENCHMARK(BM_NewtonOracle)->Arg(5)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
