#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "loadcorr/stats.hpp"

using namespace loadcorr::stats;

namespace {

void BM_TCdf(benchmark::State& st) {
  double t = 0.1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(t_cdf(t, 48.0));
    t = t > 8 ? 0.1 : t + 0.37;
  }
}
BENCHMARK(BM_TCdf);

void BM_Pearson(benchmark::State& st) {
  std::mt19937_64 g(1);
  std::normal_distribution<double> d;
  std::vector<double> x(st.range(0)), y(st.range(0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = d(g);
    y[i] = x[i] + d(g);
  }
  for (auto _ : st) benchmark::DoNotOptimize(pearson(x, y));
}
BENCHMARK(BM_Pearson)->Arg(550)->Arg(5500);

void BM_TTest(benchmark::State& st) {
  std::mt19937_64 g(2);
  std::normal_distribution<double> d;
  std::vector<double> a(st.range(0)), b(st.range(0));
  for (auto& v : a) v = d(g);
  for (auto& v : b) v = d(g) + 0.1;
  for (auto _ : st) benchmark::DoNotOptimize(two_sample_ttest(a, b));
}
BENCHMARK(BM_TTest)->Arg(1000)->Arg(20000);

}  // namespace
