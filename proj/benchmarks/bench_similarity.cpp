#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "loadcorr/similarity.hpp"

using namespace loadcorr::similarity;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(g);
  return v;
}

void BM_Euclidean(benchmark::State& st) {
  const auto a = noise(st.range(0), 1), b = noise(st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(euclidean(a, b));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Euclidean)->Arg(301)->Arg(3001);

void BM_Correlation(benchmark::State& st) {
  const auto a = noise(st.range(0), 1), b = noise(st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(correlation_distance(a, b));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Correlation)->Arg(301)->Arg(3001);

void BM_DtwBanded(benchmark::State& st) {
  const auto a = noise(st.range(0), 1), b = noise(st.range(0), 2);
  const auto cfg = DtwConfig::band(static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(dtw(a, b, cfg));
}
BENCHMARK(BM_DtwBanded)->Args({301, 10})->Args({3001, 10})->Args({3001, 100});

void BM_DtwUnbounded(benchmark::State& st) {
  const auto a = noise(st.range(0), 1), b = noise(st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(dtw(a, b));
}
BENCHMARK(BM_DtwUnbounded)->Arg(301)->Arg(1001);

}  // namespace
