#include "loadcorr/experiment/systems.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "loadcorr/experiment/config.hpp"

namespace loadcorr::exp {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

grid::LoadModel flipped(const grid::LoadModel& m) {
  if (grid::kind_of(m) == grid::LoadKind::Zip) return grid::CompositeParams{};
  return grid::ZipParams{};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream, std::uint64_t index) {
  return splitmix(splitmix(splitmix(parent) ^ stream) ^ index);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ExperimentError(ExperimentErrc::InvalidInput, "Rng::below needs n > 0");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

NetworkCase place_clms(const NetworkCase& base, int clm_count, Rng& rng) {
  if (clm_count < 0) throw ExperimentError(ExperimentErrc::InvalidInput, "clm_count is negative");
  auto buses = base.load_buses();
  if (static_cast<std::size_t>(clm_count) > buses.size()) {
    throw ExperimentError(ExperimentErrc::TooManyClms,
                          std::to_string(clm_count) + " CLMs requested but case '" + base.name +
                              "' has " + std::to_string(buses.size()) + " load buses");
  }
  // Partial Fisher-Yates: the first clm_count entries are a uniform sample.
  for (std::size_t i = 0; i < static_cast<std::size_t>(clm_count); ++i) {
    std::swap(buses[i], buses[i + rng.below(buses.size() - i)]);
  }
  NetworkCase out = base;
  for (auto& [bus, load] : out.loads) load.model = grid::ZipParams{};
  for (int i = 0; i < clm_count; ++i) out.loads.at(buses[i]).model = grid::CompositeParams{};
  return out;
}

std::size_t swap_count(std::size_t n_loads, double target_accuracy) {
  if (!(target_accuracy >= 0.0 && target_accuracy <= 1.0)) {
    throw ExperimentError(ExperimentErrc::InvalidInput, "target accuracy outside [0, 1]");
  }
  return static_cast<std::size_t>(std::llround((1.0 - target_accuracy) * static_cast<double>(n_loads)));
}

BenchmarkPair derive_test_system(const NetworkCase& benchmark, double target_accuracy, Rng& rng) {
  auto buses = benchmark.load_buses();
  const std::size_t k = swap_count(buses.size(), target_accuracy);
  rng.shuffle(buses);

  BenchmarkPair pair;
  pair.benchmark = benchmark;
  pair.test = benchmark;
  for (std::size_t i = 0; i < k; ++i) {
    auto& load = pair.test.loads.at(buses[i]);
    load.model = flipped(load.model);
    pair.swapped_buses.insert(buses[i]);
  }
  pair.accuracy = system_accuracy(pair.benchmark, pair.test);
  return pair;
}

BenchmarkPair derive_test_system(const NetworkCase& benchmark, double target_accuracy,
                                 std::uint64_t seed) {
  Rng rng(seed);
  auto pair = derive_test_system(benchmark, target_accuracy, rng);
  pair.seed = seed;
  return pair;
}

std::set<BusId> mismatched_buses(const NetworkCase& benchmark, const NetworkCase& test) {
  if (benchmark.load_buses() != test.load_buses()) {
    throw ExperimentError(ExperimentErrc::InvalidInput, "benchmark and test have different load buses");
  }
  std::set<BusId> out;
  for (const auto& [bus, load] : benchmark.loads) {
    if (grid::kind_of(load.model) != grid::kind_of(test.loads.at(bus).model)) out.insert(bus);
  }
  return out;
}

double system_accuracy(const NetworkCase& benchmark, const NetworkCase& test) {
  const auto n = benchmark.loads.size();
  if (n == 0) throw ExperimentError(ExperimentErrc::InvalidInput, "case has no load buses");
  const auto wrong = mismatched_buses(benchmark, test).size();
  return static_cast<double>(n - wrong) / static_cast<double>(n);
}

double system_accuracy(const BenchmarkPair& pair) {
  return system_accuracy(pair.benchmark, pair.test);
}

}  // namespace loadcorr::exp
