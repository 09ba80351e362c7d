#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "loadcorr/experiment/config.hpp"
#include "loadcorr/gridsim/case.hpp"

namespace loadcorr::exp {

/// Child seed for (stream, index) under `parent`. SplitMix64 finalizer over a
/// mix of the three words; independent of call order.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream, std::uint64_t index);

/// mt19937_64 with unbiased bounded draws, so sequences do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  std::uint64_t next() { return engine_(); }

  /// Full Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Copy of `base` with exactly clm_count load buses drawn uniformly without
/// replacement set to default Composite models and the rest to default Zip.
/// Throws ExperimentError(TooManyClms) if clm_count exceeds the load count
/// and InvalidInput if it is negative.
NetworkCase place_clms(const NetworkCase& base, int clm_count, Rng& rng);

struct BenchmarkPair {
  NetworkCase benchmark;
  NetworkCase test;
  double accuracy = 1.0;
  std::set<BusId> swapped_buses;
  std::uint64_t seed = 0;
};

/// round((1 - target) * n_loads). Throws InvalidInput outside [0, 1].
std::size_t swap_count(std::size_t n_loads, double target_accuracy);

/// Flips Zip <-> Composite (default parameters of the new kind) at
/// swap_count() buses taken from the front of a uniform permutation of the
/// load buses. The permutation consumes the same draws for every target, so
/// equal seeds give nested swap sets.
BenchmarkPair derive_test_system(const NetworkCase& benchmark, double target_accuracy, Rng& rng);
BenchmarkPair derive_test_system(const NetworkCase& benchmark, double target_accuracy,
                                 std::uint64_t seed);

/// Matching load-model kinds over total load buses. Both cases must have the
/// same load buses (InvalidInput otherwise).
double system_accuracy(const NetworkCase& benchmark, const NetworkCase& test);
double system_accuracy(const BenchmarkPair& pair);

/// Load buses whose model kinds differ.
std::set<BusId> mismatched_buses(const NetworkCase& benchmark, const NetworkCase& test);

}  // namespace loadcorr::exp
