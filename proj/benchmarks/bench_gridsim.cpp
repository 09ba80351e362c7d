#include <benchmark/benchmark.h>

#include "loadcorr/gridsim/cases.hpp"
#include "loadcorr/gridsim/powerflow.hpp"
#include "loadcorr/gridsim/simulate.hpp"

using namespace loadcorr::grid;

namespace {

void BM_PowerFlowRts73(benchmark::State& st) {
  const auto c = make_rts73_case();
  for (auto _ : st) benchmark::DoNotOptimize(solve_power_flow(c));
}
BENCHMARK(BM_PowerFlowRts73)->Unit(benchmark::kMillisecond);

void BM_FaultNineBus(benchmark::State& st) {
  const auto c = make_nine_bus_case();
  SimulationOptions opts;
  opts.span = static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(run_simulation(c, BusFault{5, 0.1, 0.2, 1e4}, opts));
}
BENCHMARK(BM_FaultNineBus)->Arg(3)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_FaultRts73(benchmark::State& st) {
  const auto c = make_rts73_case();
  SimulationOptions opts;
  opts.span = 30.0;
  for (auto _ : st) benchmark::DoNotOptimize(run_simulation(c, BusFault{204, 0.1, 0.2, 1e4}, opts));
}
BENCHMARK(BM_FaultRts73)->Unit(benchmark::kMillisecond);

}  // namespace
