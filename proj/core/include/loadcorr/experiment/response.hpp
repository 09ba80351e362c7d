#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "loadcorr/experiment/config.hpp"
#include "loadcorr/similarity.hpp"
#include "loadcorr/timeseries.hpp"

namespace loadcorr::exp {

/// ED sums squared per-step deviations, MH absolute ones. DTW, COS and COR
/// are single whole-window measures from the similarity module, whose errors
/// (SimilarityError) propagate. Throws SimilarityError(LengthMismatch) on
/// unequal lengths.
double response_error(std::span<const double> bench, std::span<const double> test, Measure measure,
                      const similarity::DtwConfig& dtw = {});

/// Aligns the two series first (same channel, dt and grid).
double response_error(const TimeSeries& bench, const TimeSeries& test, Measure measure,
                      const similarity::DtwConfig& dtw = {});

struct ResponseErrorRecord {
  SourceId source;
  ChannelKind channel = ChannelKind::VoltageMagnitude;
  double span = 0.0;
  Measure measure = Measure::ED;
  double error = 0.0;
  /// The source's load model matches the benchmark. Always true for branches.
  bool model_accurate = true;

  // provenance
  std::uint64_t pair_seed = 0;
  BusId fault_bus = 0;
  int benchmark = 0;
  int level = 0;
  int fault = 0;
  double accuracy = 1.0;
};

/// Sum of the errors. Throws ExperimentError: InvalidInput on an empty set,
/// MixedKeys if channel, span or measure differ between records.
double system_response_error(std::span<const ResponseErrorRecord> records);

}  // namespace loadcorr::exp
