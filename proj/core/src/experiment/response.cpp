#include "loadcorr/experiment/response.hpp"

#include <cmath>
#include <string>

namespace loadcorr::exp {

double response_error(std::span<const double> bench, std::span<const double> test, Measure measure,
                      const similarity::DtwConfig& dtw) {
  using similarity::SimilarityErrc;
  using similarity::SimilarityError;
  if (bench.size() != test.size()) {
    throw SimilarityError(SimilarityErrc::LengthMismatch,
                          "response series differ in length: " + std::to_string(bench.size()) +
                              " vs " + std::to_string(test.size()));
  }
  if (bench.empty()) throw SimilarityError(SimilarityErrc::EmptySeries, "empty response series");
  switch (measure) {
    case Measure::ED: {
      double s = 0.0;
      for (std::size_t t = 0; t < bench.size(); ++t) {
        const double d = bench[t] - test[t];
        s += d * d;
      }
      return s;
    }
    case Measure::MH: {
      double s = 0.0;
      for (std::size_t t = 0; t < bench.size(); ++t) s += std::abs(bench[t] - test[t]);
      return s;
    }
    default:
      return similarity::evaluate(measure, bench, test, dtw);
  }
}

double response_error(const TimeSeries& bench, const TimeSeries& test, Measure measure,
                      const similarity::DtwConfig& dtw) {
  const auto [a, b] = align(bench, test);
  return response_error(a.values(), b.values(), measure, dtw);
}

double system_response_error(std::span<const ResponseErrorRecord> records) {
  if (records.empty()) {
    throw ExperimentError(ExperimentErrc::InvalidInput, "no response error records to sum");
  }
  const auto& first = records.front();
  double sum = 0.0;
  for (const auto& r : records) {
    if (r.channel != first.channel || r.span != first.span || r.measure != first.measure) {
      throw ExperimentError(ExperimentErrc::MixedKeys, "records mix channel, span or measure keys");
    }
    sum += r.error;
  }
  return sum;
}

}  // namespace loadcorr::exp
