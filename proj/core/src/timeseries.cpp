#include "loadcorr/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace loadcorr {

std::string_view abbreviation(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::VoltageMagnitude: return "V";
    case ChannelKind::VoltageAngle: return "ANG";
    case ChannelKind::Frequency: return "F";
    case ChannelKind::LineActivePower: return "P";
    case ChannelKind::LineReactivePower: return "Q";
  }
  return "?";
}

ChannelKind parse_channel(std::string_view text) {
  for (ChannelKind kind : kAllChannels) {
    if (abbreviation(kind) == text) return kind;
  }
  throw TimeSeriesError(TimeSeriesErrc::ParseError,
                        "unknown channel '" + std::string(text) + "' (expected V, ANG, F, P or Q)");
}

bool is_bus_channel(ChannelKind kind) {
  return kind == ChannelKind::VoltageMagnitude || kind == ChannelKind::VoltageAngle ||
         kind == ChannelKind::Frequency;
}

std::string_view to_string(TimeSeriesErrc code) {
  switch (code) {
    case TimeSeriesErrc::InvalidSeries: return "InvalidSeries";
    case TimeSeriesErrc::SpanExceedsData: return "SpanExceedsData";
    case TimeSeriesErrc::IncompatibleSeries: return "IncompatibleSeries";
    case TimeSeriesErrc::NoOverlap: return "NoOverlap";
    case TimeSeriesErrc::BadMagnitude: return "BadMagnitude";
    case TimeSeriesErrc::AllZero: return "AllZero";
    case TimeSeriesErrc::InvalidInput: return "InvalidInput";
    case TimeSeriesErrc::ParseError: return "ParseError";
  }
  return "?";
}

std::string_view to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::AmplitudeShift: return "amplitude_shift";
    case PerturbationKind::AmplitudeStretch: return "amplitude_stretch";
    case PerturbationKind::TimeShift: return "time_shift";
    case PerturbationKind::TimeStretch: return "time_stretch";
  }
  return "?";
}

TimeSeries::TimeSeries(double start_time, double dt, std::vector<double> values,
                       ChannelKind channel, SourceId source)
    : start_time_(start_time),
      dt_(dt),
      values_(std::move(values)),
      channel_(channel),
      source_(std::move(source)) {
  if (values_.empty()) {
    throw TimeSeriesError(TimeSeriesErrc::InvalidSeries, "time series must be non-empty");
  }
  if (!std::isfinite(dt_) || dt_ <= 0.0) {
    throw TimeSeriesError(TimeSeriesErrc::InvalidSeries, "time step must be positive and finite");
  }
  if (!std::isfinite(start_time_)) {
    throw TimeSeriesError(TimeSeriesErrc::InvalidSeries, "start time must be finite");
  }
  const auto bad = std::find_if(values_.begin(), values_.end(),
                                [](double v) { return !std::isfinite(v); });
  if (bad != values_.end()) {
    throw TimeSeriesError(TimeSeriesErrc::InvalidSeries,
                          "non-finite sample at index " +
                              std::to_string(std::distance(values_.begin(), bad)));
  }
}

std::size_t samples_for_span(double span, double dt) {
  // A micro-sample of slack absorbs representation error in span/dt.
  return static_cast<std::size_t>(std::floor(span / dt + 1e-6)) + 1;
}

TimeSeries truncate(const TimeSeries& ts, double span) {
  if (!(span > 0.0) || !std::isfinite(span)) {
    throw TimeSeriesError(TimeSeriesErrc::InvalidInput, "truncation span must be positive");
  }
  const std::size_t count = samples_for_span(span, ts.dt());
  if (count > ts.size()) {
    throw TimeSeriesError(TimeSeriesErrc::SpanExceedsData,
                          "span " + std::to_string(span) + " s exceeds series duration " +
                              std::to_string(ts.duration()) + " s");
  }
  if (count == ts.size()) return ts;
  std::vector<double> head(ts.values().begin(), ts.values().begin() + static_cast<long>(count));
  return TimeSeries(ts.start_time(), ts.dt(), std::move(head), ts.channel(), ts.source());
}

std::pair<TimeSeries, TimeSeries> align(const TimeSeries& a, const TimeSeries& b) {
  if (a.channel() != b.channel()) {
    throw TimeSeriesError(TimeSeriesErrc::IncompatibleSeries, "channel kinds differ");
  }
  const double dt = a.dt();
  if (std::abs(a.dt() - b.dt()) > 1e-12 * dt) {
    throw TimeSeriesError(TimeSeriesErrc::IncompatibleSeries, "sampling steps differ");
  }
  const double offset = (b.start_time() - a.start_time()) / dt;
  const double rounded = std::round(offset);
  if (std::abs(offset - rounded) > 1e-6) {
    throw TimeSeriesError(TimeSeriesErrc::IncompatibleSeries, "sample grids are not aligned");
  }
  const auto shift = static_cast<long long>(rounded);
  // Index ranges in each series' own sample numbering.
  const long long a_lo = std::max<long long>(0, shift);
  const long long b_lo = std::max<long long>(0, -shift);
  const long long a_hi = std::min<long long>(static_cast<long long>(a.size()),
                                             shift + static_cast<long long>(b.size()));
  const long long count = a_hi - a_lo;
  if (count <= 0) {
    throw TimeSeriesError(TimeSeriesErrc::NoOverlap, "series do not overlap in time");
  }
  if (a_lo == 0 && b_lo == 0 && static_cast<std::size_t>(count) == a.size() &&
      a.size() == b.size()) {
    return {a, b};
  }
  auto slice = [count](const TimeSeries& ts, long long lo) {
    std::vector<double> v(ts.values().begin() + lo, ts.values().begin() + lo + count);
    return TimeSeries(ts.time_at(static_cast<std::size_t>(lo)), ts.dt(), std::move(v),
                      ts.channel(), ts.source());
  };
  return {slice(a, a_lo), slice(b, b_lo)};
}

namespace {

// Linear interpolation on sample index, clamped to the boundary samples.
double sample_at(std::span<const double> v, double index) {
  if (index <= 0.0) return v.front();
  const double last = static_cast<double>(v.size() - 1);
  if (index >= last) return v.back();
  const auto lo = static_cast<std::size_t>(std::floor(index));
  const double frac = index - static_cast<double>(lo);
  if (frac == 0.0) return v[lo];
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

}  // namespace

TimeSeries apply_perturbation(const TimeSeries& ts, const Perturbation& p) {
  if (!std::isfinite(p.magnitude)) {
    throw TimeSeriesError(TimeSeriesErrc::BadMagnitude, "perturbation magnitude must be finite");
  }
  const auto in = ts.values();
  std::vector<double> out(in.size());
  switch (p.kind) {
    case PerturbationKind::AmplitudeShift:
      std::transform(in.begin(), in.end(), out.begin(), [&](double x) { return x + p.magnitude; });
      break;
    case PerturbationKind::AmplitudeStretch:
      if (p.magnitude <= 0.0) {
        throw TimeSeriesError(TimeSeriesErrc::BadMagnitude, "amplitude stretch must be > 0");
      }
      std::transform(in.begin(), in.end(), out.begin(), [&](double x) { return x * p.magnitude; });
      break;
    case PerturbationKind::TimeShift: {
      if (p.magnitude != std::round(p.magnitude)) {
        throw TimeSeriesError(TimeSeriesErrc::BadMagnitude,
                              "time shift must be an integer number of samples");
      }
      const auto n = static_cast<long long>(in.size());
      const auto k = static_cast<long long>(p.magnitude);
      if (k >= n || -k >= n) {
        throw TimeSeriesError(TimeSeriesErrc::BadMagnitude, "time shift must be shorter than series");
      }
      for (long long i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = in[static_cast<std::size_t>(std::clamp(i - k, 0LL, n - 1))];
      }
      break;
    }
    case PerturbationKind::TimeStretch:
      if (p.magnitude <= 0.0) {
        throw TimeSeriesError(TimeSeriesErrc::BadMagnitude, "time stretch must be > 0");
      }
      for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = sample_at(in, p.magnitude * static_cast<double>(i));
      }
      break;
  }
  return TimeSeries(ts.start_time(), ts.dt(), std::move(out), ts.channel(), ts.source());
}

TimeSeries synth_sine(double amplitude, double frequency, double phase, double span, double dt,
                      ChannelKind channel, SourceId source) {
  if (!(dt > 0.0) || !(span > 0.0)) {
    throw TimeSeriesError(TimeSeriesErrc::InvalidInput, "span and dt must be positive");
  }
  const std::size_t n = samples_for_span(span, dt);
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = amplitude *
           std::sin(2.0 * std::numbers::pi * frequency * (static_cast<double>(k) * dt) + phase);
  }
  return TimeSeries(0.0, dt, std::move(v), channel, std::move(source));
}

std::vector<double> normalize_error_profile(std::span<const double> errors) {
  if (errors.empty()) {
    throw TimeSeriesError(TimeSeriesErrc::InvalidInput, "error profile is empty");
  }
  for (double e : errors) {
    if (!std::isfinite(e) || e < 0.0) {
      throw TimeSeriesError(TimeSeriesErrc::InvalidInput,
                            "error profile entries must be finite and non-negative");
    }
  }
  const double total = std::accumulate(errors.begin(), errors.end(), 0.0);
  if (total == 0.0) {
    throw TimeSeriesError(TimeSeriesErrc::AllZero, "every error in the profile is zero");
  }
  std::vector<double> out(errors.size());
  std::transform(errors.begin(), errors.end(), out.begin(), [total](double e) { return e / total; });
  return out;
}

}  // namespace loadcorr
