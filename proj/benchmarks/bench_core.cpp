#include <benchmark/benchmark.h>

#include "netpublic/best_response.hpp"
#include "netpublic/equilibrium.hpp"
#include "netpublic/metrics.hpp"
#include "netpublic/sweep.hpp"

using namespace netpublic;

namespace {

GameParams society(std::size_t n, double k) {
  GameParams p;
  p.types = sample_types(TypeDistribution::uniform(), n, 7);
  p.k = k;
  return p;
}

void BM_BestResponseExact(benchmark::State& state) {
  const auto p = society(static_cast<std::size_t>(state.range(0)), 0.5);
  const auto s = construct_independent(p);
  for (auto _ : state) benchmark::DoNotOptimize(best_response(p.n() / 2, s, p, SearchMode::Exact));
}
BENCHMARK(BM_BestResponseExact)->Arg(8)->Arg(12)->Arg(16);

void BM_BestResponseStructural(benchmark::State& state) {
  const auto p = society(static_cast<std::size_t>(state.range(0)), 0.98);
  const auto s = construct_independent(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_response(p.n() / 2, s, p, SearchMode::Structural));
  }
}
BENCHMARK(BM_BestResponseStructural)->Arg(50)->Arg(200)->Arg(800);

void BM_ConstructIndependent(benchmark::State& state) {
  const auto p = society(static_cast<std::size_t>(state.range(0)), 0.98);
  for (auto _ : state) benchmark::DoNotOptimize(construct_independent(p));
}
BENCHMARK(BM_ConstructIndependent)->Arg(200)->Arg(800);

void BM_VerifyStructural(benchmark::State& state) {
  const auto p = society(static_cast<std::size_t>(state.range(0)), 0.98);
  const auto s = construct_independent(p);
  for (auto _ : state) benchmark::DoNotOptimize(verify_nash(s, p, SearchMode::Structural));
}
BENCHMARK(BM_VerifyStructural)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Polarization(benchmark::State& state) {
  const auto p = society(static_cast<std::size_t>(state.range(0)), 0.5);
  const auto s = construct_independent(p);
  for (auto _ : state) benchmark::DoNotOptimize(polarization(s));
}
BENCHMARK(BM_Polarization)->Arg(200)->Arg(2000);

void BM_WelfareMax(benchmark::State& state) {
  const auto p = society(static_cast<std::size_t>(state.range(0)), 0.9);
  WelfareMaxOptions opts;
  opts.threads = false;
  for (auto _ : state) benchmark::DoNotOptimize(welfare_max_equilibrium(p, opts));
}
BENCHMARK(BM_WelfareMax)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
