#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "loadcorr/gridsim/case.hpp"
#include "loadcorr/similarity.hpp"
#include "loadcorr/timeseries.hpp"

namespace loadcorr::exp {

using similarity::Measure;
using grid::BusId;
using grid::NetworkCase;

enum class ExperimentErrc {
  InvalidConfig,
  TooManyClms,
  MixedKeys,
  InsufficientSamples,
  InvalidInput,
};

std::string_view to_string(ExperimentErrc code);

class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(ExperimentErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExperimentErrc code() const noexcept { return code_; }

 private:
  ExperimentErrc code_;
};

/// Config validation failure carrying every violated field.
class ConfigError : public ExperimentError {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

enum class Level { System, Bus };

enum class DisturbanceKind { BusFault, GeneratorOutage };

struct AccuracyRange {
  double lo;
  double hi;
  friend bool operator==(const AccuracyRange&, const AccuracyRange&) = default;
};

struct ExperimentConfig {
  int n_benchmark_systems = 100;
  int n_fault_locations = 5;
  std::vector<double> accuracy_levels = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> spans = {3.0, 10.0, 30.0};
  std::vector<Measure> measures = {similarity::kAllMeasures.begin(), similarity::kAllMeasures.end()};
  std::vector<ChannelKind> channels = {kAllChannels.begin(), kAllChannels.end()};
  int clm_count = 14;
  double dt = 0.01;
  std::uint64_t master_seed = 1;

  /// DTW band half-width in samples; nullopt runs unbounded DTW.
  std::optional<std::size_t> dtw_window = 10;
  DisturbanceKind disturbance = DisturbanceKind::BusFault;
  double t_apply = 0.1;
  double t_clear = 0.2;
  double fault_admittance = 1e4;
  /// Bus level: pool bins across accuracy levels, or also report per level.
  bool stratified = false;
  bool welch = false;
  std::vector<AccuracyRange> accuracy_ranges = {{0.0, 0.30}, {0.38, 0.54}, {0.62, 0.77}, {0.84, 1.0}};
  /// Branches whose P/Q are measured; empty means all.
  std::vector<std::string> branches;
};

/// Parses the JSON form (keys mirror the struct fields; measures and
/// channels by abbreviation). Unknown keys and type errors are violations.
/// Throws ConfigError listing all of them.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Every violated constraint, empty if valid. With a case, also checks the
/// CLM count, fault count and branch names against it.
std::vector<std::string> violations(const ExperimentConfig& cfg, Level level,
                                    const grid::NetworkCase* c = nullptr);

/// Throws ConfigError if violations() is non-empty.
void validate(const ExperimentConfig& cfg, Level level, const grid::NetworkCase* c = nullptr);

}  // namespace loadcorr::exp
