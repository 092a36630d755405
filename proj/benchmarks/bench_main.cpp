#include <benchmark/benchmark.h>

#include "spherelab/coherent.hpp"
#include "spherelab/harmonics.hpp"
#include "spherelab/identities.hpp"

using namespace spherelab;

// Band product of two grade-(2,2) operators vs the plain dense product.
static void BM_BandProduct(benchmark::State& state) {
  const auto b = build_basis(static_cast<int>(state.range(0)));
  const auto N = direction_N<double>(b);
  for (auto _ : state) benchmark::DoNotOptimize(N.x() * N.y());
  state.counters["dim"] = static_cast<double>(b->dim());
}
BENCHMARK(BM_BandProduct)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_DenseProduct(benchmark::State& state) {
  const auto b = build_basis(static_cast<int>(state.range(0)));
  const auto N = direction_N<double>(b);
  for (auto _ : state) {
    LinOp::matrix_type m = N.x().matrix() * N.y().matrix();
    benchmark::DoNotOptimize(m.data());
  }
}
BENCHMARK(BM_DenseProduct)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_OperatorSet(benchmark::State& state) {
  const auto b = build_basis(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_operator_set<double>(b, 1.0));
}
BENCHMARK(BM_OperatorSet)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_ExtendedOperatorSet(benchmark::State& state) {
  const auto b = build_basis(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_operator_set<Quad>(b, 1.0));
}
BENCHMARK(BM_ExtendedOperatorSet)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_IdentitySuite(benchmark::State& state) {
  const auto b = build_basis(static_cast<int>(state.range(0)));
  const auto set = build_operator_set<double>(b, 1.0);
  const auto ext = build_operator_set<Quad>(b, 1.0);
  const auto suite = standard_suite();
  for (auto _ : state) benchmark::DoNotOptimize(run(suite, set, {}, &ext));
}
BENCHMARK(BM_IdentitySuite)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_CoherentSolve(benchmark::State& state) {
  const CoherentSolver solver(build_basis(static_cast<int>(state.range(0))), 1.0);
  const auto label = label_of({{1, 0, 0}, {0, 1, 0}}, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(label));
}
BENCHMARK(BM_CoherentSolve)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_Xcheck(benchmark::State& state) {
  const int j_max = static_cast<int>(state.range(0));
  const auto set = build_operator_set<double>(build_basis(2 * j_max + 2), 1.0);
  for (auto _ : state) {
    const auto table = build_table(j_max);
    benchmark::DoNotOptimize(xcheck(set, table, j_max));
  }
}
BENCHMARK(BM_Xcheck)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
