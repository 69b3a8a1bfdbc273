// Serial reference vs OpenMP kernels on the Monte Carlo hot paths.

#include <benchmark/benchmark.h>

#include "ccauction/experiments.hpp"
#include "ccauction/fixed_point.hpp"
#include "ccauction/simulate.hpp"

using namespace ccauction;

namespace {

Exec mode(const benchmark::State& st) { return st.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void label(benchmark::State& st) { st.SetLabel(st.range(0) == 0 ? "serial" : "parallel"); }

void BM_EstimateQ(benchmark::State& st) {
  const auto p = AuctionParams::from_lambda(64, 3, 1.5);
  const double a = cf::a0(64, p.T), b = cf::b0(64, 3, p.T);
  for (auto _ : st) benchmark::DoNotOptimize(estimate_q_ell(2, a, b, p, 1 << 18, Seed{1, 0}, mode(st)));
  label(st);
}

void BM_SimulateMechanisms(benchmark::State& st) {
  const auto p = AuctionParams::from_lambda(64, 2, 1.5);
  const double a0 = cf::a0(64, p.T), b0 = cf::b0(64, 2, p.T);
  const InterimRates r = cf::rates_map(std::vector<double>{0.0}, p);
  for (auto _ : st)
    benchmark::DoNotOptimize(simulate_mechanisms(p, a0, b0, &r, SimConfig{50000, Seed{2, 0}, mode(st)}));
  label(st);
}

void BM_RealizedRates(benchmark::State& st) {
  const auto p = AuctionParams::from_lambda(64, 3, 1.5);
  const double a = cf::a0(64, p.T), b = cf::b0(64, 3, p.T);
  for (auto _ : st) benchmark::DoNotOptimize(simulate_realized_rates(p, a, b, SimConfig{50000, Seed{3, 0}, mode(st)}));
  label(st);
}

void BM_Benchmark(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(cdw_benchmark(DistSpec::truncated(18.0), 64, 2, 50000, Seed{4, 0}, mode(st)));
  label(st);
}

}  // namespace

BENCHMARK(BM_EstimateQ)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateMechanisms)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RealizedRates)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Benchmark)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
