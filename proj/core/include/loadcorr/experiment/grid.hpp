#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loadcorr/experiment/config.hpp"
#include "loadcorr/experiment/response.hpp"

namespace loadcorr::exp {

/// Why a cell holds (or lacks) a value.
enum class CellStatus {
  Ok,
  NotRequested,
  ZeroVariance,
  InsufficientSamples,
  SimFailure,
  ZeroPooledVariance,
};

std::string_view to_string(CellStatus s);

struct CellKey {
  double span = 0.0;
  ChannelKind channel = ChannelKind::VoltageMagnitude;
  Measure measure = Measure::ED;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct GridCell {
  CellKey key;
  CellStatus status = CellStatus::NotRequested;
  double r = std::numeric_limits<double>::quiet_NaN();  // system level only
  double p = std::numeric_limits<double>::quiet_NaN();
  std::size_t n = 0;  // samples entering the statistic
  std::size_t n_accurate = 0;    // bus level
  std::size_t n_inaccurate = 0;  // bus level
  std::size_t n_failed = 0;      // samples lost to simulation or measure errors

  bool ok() const noexcept { return status == CellStatus::Ok; }
  /// r <= -0.5 on a system-level Ok cell.
  bool strong() const;
  /// p < 0.05 on an Ok cell.
  bool significant() const;
  /// Status name for empty cells, else "strong", "significant",
  /// "strong+significant" or "none".
  std::string flag() const;
};

/// Cells ordered span-major, then channel, then measure over the full axes:
/// all five channels at system level, V/ANG/F at bus level, all measures.
struct MetricGrid {
  Level level = Level::System;
  std::vector<double> spans;
  std::vector<GridCell> cells;

  /// Throws std::out_of_range for a key outside the axes.
  const GridCell& at(const CellKey& key) const;
  std::size_t significant_count() const;
  std::size_t strong_count() const;
};

/// Empty grid with every cell NotRequested.
MetricGrid make_grid(Level level, const std::vector<double>& spans);

/// One (benchmark pair, fault location) comparison at system level.
struct SystemSample {
  int benchmark = 0;
  int level = 0;
  int fault = 0;
  std::uint64_t pair_seed = 0;
  BusId fault_bus = 0;
  double accuracy = 1.0;
  std::size_t swapped = 0;
  /// Empty when both simulations succeeded.
  std::string sim_failure;
  /// System response error per cell; absent keys were not computed.
  std::map<CellKey, double> errors;
  /// Measure errors, keyed like `errors`.
  std::map<CellKey, std::string> measure_failures;
};

/// Pearson r and p of system response error against accuracy for every
/// requested cell. Needs 3 valid samples per cell.
MetricGrid system_grid_from_samples(const ExperimentConfig& cfg, std::span<const SystemSample> samples);

/// Two-sample t-test between accurate and inaccurate bus records per cell,
/// pooled across levels, or restricted to accuracy level `level` (index into
/// cfg.accuracy_levels). `failed_samples` counts comparisons lost before any
/// record was produced. Zero pooled variance with different means yields the
/// limiting p = 0; equal means give a ZeroPooledVariance cell.
MetricGrid bus_grid_from_records(const ExperimentConfig& cfg,
                                 std::span<const ResponseErrorRecord> records,
                                 std::size_t failed_samples = 0,
                                 std::optional<int> level = std::nullopt);

struct RangeResult {
  AccuracyRange range;
  CellStatus status = CellStatus::InsufficientSamples;
  double r = std::numeric_limits<double>::quiet_NaN();
  double p = std::numeric_limits<double>::quiet_NaN();
  std::size_t n = 0;
};

/// Pearson r of error against accuracy within each closed accuracy interval.
/// Fewer than 3 samples gives InsufficientSamples, a flat input ZeroVariance.
/// Throws InvalidInput on length mismatch or overlapping ranges.
std::vector<RangeResult> range_correlations(std::span<const double> accuracy,
                                            std::span<const double> error,
                                            std::span<const AccuracyRange> ranges);

struct CellRanges {
  CellKey key;
  std::vector<RangeResult> ranges;
};

/// range_correlations for every requested system cell.
std::vector<CellRanges> system_range_correlations(const ExperimentConfig& cfg,
                                                  std::span<const SystemSample> samples);

}  // namespace loadcorr::exp
