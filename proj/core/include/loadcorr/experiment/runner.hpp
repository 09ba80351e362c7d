#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "loadcorr/experiment/config.hpp"
#include "loadcorr/experiment/grid.hpp"
#include "loadcorr/experiment/response.hpp"
#include "loadcorr/experiment/systems.hpp"
#include "loadcorr/gridsim/simulate.hpp"
#include "loadcorr/stats.hpp"

namespace loadcorr::exp {

/// Produces the responses of one system to one disturbance. The default is
/// grid::run_simulation; tests substitute synthetic responses.
using ResponseProvider = std::function<grid::ResponseSet(
    const NetworkCase&, const grid::Disturbance&, const grid::SimulationOptions&)>;

struct RunOptions {
  int jobs = 1;
  ResponseProvider provider;
  /// Called after each (benchmark, fault) job, from worker threads but never
  /// concurrently.
  std::function<void(std::size_t done, std::size_t total)> progress;
  /// Skip simulation: the system response error of a sample becomes its
  /// mismatched-load count, a bus record's error 1 if inaccurate else 0.
  bool oracle = false;
};

/// Every random draw of an experiment, fixed before anything is simulated.
struct ExperimentPlan {
  std::vector<std::uint64_t> benchmark_seeds;
  /// Per benchmark: seed of the swap permutation, shared by all levels.
  std::vector<std::uint64_t> pair_seeds;
  std::vector<NetworkCase> benchmarks;
  /// [benchmark][level]
  std::vector<std::vector<BenchmarkPair>> pairs;
  /// [benchmark][fault]
  std::vector<std::vector<grid::Disturbance>> disturbances;
};

/// Benchmark b uses seed derive_seed(master, 0, b); CLMs, fault locations
/// and the swap permutation draw from child streams 1, 2 and 3 of it. Fault
/// buses are sampled without replacement from the non-slack buses (machines
/// for generator outages).
ExperimentPlan plan_experiment(const ExperimentConfig& cfg, const NetworkCase& base);

struct SystemLevelResult {
  MetricGrid grid;
  /// Ordered by (benchmark, level, fault).
  std::vector<SystemSample> samples;
  std::vector<CellRanges> ranges;
};

struct BusLevelResult {
  MetricGrid grid;
  /// Stratified runs only: one grid per accuracy level.
  std::vector<MetricGrid> per_level;
  /// Ordered by (benchmark, level, fault, span, channel, measure, bus).
  std::vector<ResponseErrorRecord> records;
  std::size_t failed_samples = 0;
};

struct RunStats {
  std::size_t simulations = 0;
  std::size_t simulation_failures = 0;
  double seconds = 0.0;
};

enum class Which { System, Bus, Both };

struct ExperimentResult {
  std::optional<SystemLevelResult> system;
  std::optional<BusLevelResult> bus;
  RunStats stats;
};

/// Runs both levels from one set of simulations. For Which::Both the config is
/// validated at system level and the bus level uses its V/ANG/F channels.
/// Throws ConfigError on an invalid config; simulator failures only empty
/// the affected samples.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const NetworkCase& base, Which which,
                                const RunOptions& opts = {});

SystemLevelResult run_system_level(const ExperimentConfig& cfg, const NetworkCase& base,
                                   const RunOptions& opts = {});
BusLevelResult run_bus_level(const ExperimentConfig& cfg, const NetworkCase& base,
                             const RunOptions& opts = {});

/// Pearson correlation between accuracy and mismatched-load count over all
/// planned samples; r = -1 by construction. Throws StatsError(ZeroVariance)
/// when every sample has the same accuracy.
stats::CorrelationResult oracle_sanity(const ExperimentConfig& cfg, const NetworkCase& base);

}  // namespace loadcorr::exp
