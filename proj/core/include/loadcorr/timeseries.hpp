#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace loadcorr {

/// Output channel captured from a simulation. Bus channels are V, ANG and F;
/// branch channels are P and Q.
enum class ChannelKind {
  VoltageMagnitude,   // pu
  VoltageAngle,       // rad
  Frequency,          // Hz
  LineActivePower,    // pu
  LineReactivePower,  // pu
};

inline constexpr std::array<ChannelKind, 5> kAllChannels = {
    ChannelKind::VoltageMagnitude, ChannelKind::VoltageAngle, ChannelKind::Frequency,
    ChannelKind::LineActivePower, ChannelKind::LineReactivePower};

inline constexpr std::array<ChannelKind, 3> kBusChannels = {
    ChannelKind::VoltageMagnitude, ChannelKind::VoltageAngle, ChannelKind::Frequency};

/// Report abbreviation: V, ANG, F, P, Q.
std::string_view abbreviation(ChannelKind kind);
/// Inverse of abbreviation(); throws TimeSeriesError(ParseError) on unknown text.
ChannelKind parse_channel(std::string_view text);
bool is_bus_channel(ChannelKind kind);

/// Bus number rendered as text for bus channels, branch name for branch channels.
using SourceId = std::string;

enum class TimeSeriesErrc {
  InvalidSeries,
  SpanExceedsData,
  IncompatibleSeries,
  NoOverlap,
  BadMagnitude,
  AllZero,
  InvalidInput,
  ParseError,
};

std::string_view to_string(TimeSeriesErrc code);

class TimeSeriesError : public std::runtime_error {
 public:
  TimeSeriesError(TimeSeriesErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  TimeSeriesErrc code() const noexcept { return code_; }

 private:
  TimeSeriesErrc code_;
};

/// Uniformly sampled real-valued channel output. Immutable after construction.
class TimeSeries {
 public:
  /// Throws TimeSeriesError(InvalidSeries) if values is empty, dt is not a
  /// positive finite number, or any sample is non-finite.
  TimeSeries(double start_time, double dt, std::vector<double> values,
             ChannelKind channel = ChannelKind::VoltageMagnitude, SourceId source = {});

  double start_time() const noexcept { return start_time_; }
  double dt() const noexcept { return dt_; }
  std::span<const double> values() const noexcept { return values_; }
  ChannelKind channel() const noexcept { return channel_; }
  const SourceId& source() const noexcept { return source_; }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double time_at(std::size_t k) const noexcept {
    return start_time_ + static_cast<double>(k) * dt_;
  }
  /// (len - 1) * dt
  double duration() const noexcept { return static_cast<double>(values_.size() - 1) * dt_; }

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  double start_time_;
  double dt_;
  std::vector<double> values_;
  ChannelKind channel_;
  SourceId source_;
};

/// Prefix of `ts` covering [start, start + span]. Never extrapolates.
TimeSeries truncate(const TimeSeries& ts, double span);

/// Trims both series to their common overlap window. Requires equal channel
/// kind and dt, and sample grids that line up.
std::pair<TimeSeries, TimeSeries> align(const TimeSeries& a, const TimeSeries& b);

enum class PerturbationKind { AmplitudeShift, AmplitudeStretch, TimeShift, TimeStretch };

std::string_view to_string(PerturbationKind kind);

struct Perturbation {
  PerturbationKind kind;
  /// AmplitudeShift: additive offset. AmplitudeStretch: positive gain.
  /// TimeShift: integer sample delay (negative advances). TimeStretch:
  /// positive rate factor c so that y(t) = x(c t).
  double magnitude;
};

TimeSeries apply_perturbation(const TimeSeries& ts, const Perturbation& p);

/// values[k] = amplitude * sin(2 pi frequency k dt + phase), k = 0..round(span/dt).
TimeSeries synth_sine(double amplitude, double frequency, double phase, double span, double dt,
                      ChannelKind channel = ChannelKind::VoltageMagnitude, SourceId source = {});

/// Divides each entry by the total so the profile sums to one.
/// Throws AllZero when every entry is zero and InvalidInput on negative or
/// non-finite entries.
std::vector<double> normalize_error_profile(std::span<const double> errors);

/// Number of samples a window of `span` seconds covers on a grid of step dt
/// (inclusive of both ends).
std::size_t samples_for_span(double span, double dt);

}  // namespace loadcorr
