#include <benchmark/benchmark.h>

#include "optsel/bench.hpp"
#include "optsel/linalg.hpp"
#include "optsel/relaxation.hpp"
#include "optsel/selectors.hpp"

namespace {

using namespace optsel;

DesignMatrix design(Index n, Index p, double alpha, std::uint64_t seed) {
  DesignSpec spec;
  spec.kind = DesignKind::SkewedGaussian;
  spec.alpha = alpha;
  spec.n = n;
  spec.p = p;
  spec.seed = seed;
  return generate_design(spec);
}

void BM_TraceInverse(benchmark::State& state) {
  const auto p = static_cast<Index>(state.range(0));
  const DesignMatrix x = design(4 * p, p, 1.0, 1);
  const Matrix g = gram(x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trace_inverse(SpdMatrix(g)));
  }
}
BENCHMARK(BM_TraceInverse)->Arg(10)->Arg(50)->Arg(200);

void BM_ShermanMorrison(benchmark::State& state) {
  const auto p = static_cast<Index>(state.range(0));
  const DesignMatrix x = design(4 * p, p, 1.0, 2);
  const Matrix inv = SpdMatrix(gram(x)).inverse();
  const Vector u = x.row(0).transpose();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sherman_morrison_update(inv, u, RankOneSign::Add));
  }
}
BENCHMARK(BM_ShermanMorrison)->Arg(10)->Arg(50)->Arg(200);

void BM_Projection(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  Rng rng(3);
  Vector y(n);
  for (Index i = 0; i < n; ++i) y(i) = 2.0 * uniform01(rng);
  const double k = 0.1 * static_cast<double>(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_l1_linf(y, k, 1.0, 1e-10));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Projection)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

void BM_SolveRelaxation(benchmark::State& state) {
  const auto p = static_cast<Index>(state.range(0));
  const DesignMatrix x = design(1000, p, 3.0, 4);
  const int k = static_cast<int>(3 * p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_relaxation(x, k, SamplingMode::WithoutReplacement));
  }
}
BENCHMARK(BM_SolveRelaxation)->Arg(10)->Arg(30)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_GreedySelect(benchmark::State& state) {
  const auto p = static_cast<Index>(state.range(0));
  const DesignMatrix x = design(1000, p, 3.0, 5);
  const int k = static_cast<int>(3 * p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_select(x, k));
  }
}
BENCHMARK(BM_GreedySelect)->Arg(10)->Arg(30)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_FedorovExchange(benchmark::State& state) {
  const auto k = static_cast<int>(state.range(0));
  const DesignMatrix x = design(400, 10, 1.0, 6);
  const Selection init = Selection::from_indices(random_subset(x.rows(), k, 7), k);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fedorov_exchange(x, k, init, 5000, 8));
  }
}
BENCHMARK(BM_FedorovExchange)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
