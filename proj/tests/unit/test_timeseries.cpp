#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "loadcorr/timeseries.hpp"
#include "loadcorr/timeseries_io.hpp"

using namespace loadcorr;

namespace {

TimeSeries ramp(std::size_t n, double dt = 0.01, double start = 0.0) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i);
  return TimeSeries(start, dt, v);
}

template <typename F>
void expect_errc(F f, TimeSeriesErrc code) {
  try {
    f();
    FAIL() << "no exception";
  } catch (const TimeSeriesError& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(TimeSeries, RejectsInvalidConstruction) {
  expect_errc([] { TimeSeries(0, 0.01, {}); }, TimeSeriesErrc::InvalidSeries);
  expect_errc([] { TimeSeries(0, 0.0, {1.0}); }, TimeSeriesErrc::InvalidSeries);
  expect_errc([] { TimeSeries(0, -1.0, {1.0}); }, TimeSeriesErrc::InvalidSeries);
  expect_errc([] { TimeSeries(0, 0.01, {1.0, NAN}); }, TimeSeriesErrc::InvalidSeries);
  expect_errc([] { TimeSeries(0, 0.01, {INFINITY}); }, TimeSeriesErrc::InvalidSeries);
}

TEST(TimeSeries, DurationAndTimes) {
  const auto ts = ramp(3001, 0.01, 1.0);
  EXPECT_NEAR(ts.duration(), 30.0, 1e-12);
  EXPECT_DOUBLE_EQ(ts.time_at(0), 1.0);
  EXPECT_NEAR(ts.time_at(100), 2.0, 1e-12);
}

TEST(Truncate, Examples) {
  const auto ts = ramp(3001);
  EXPECT_EQ(truncate(ts, 30.0), ts);
  EXPECT_EQ(truncate(ts, 3.0).size(), 301u);
  EXPECT_EQ(truncate(ts, 10.0).size(), 1001u);
  expect_errc([] { truncate(ramp(1001), 30.0); }, TimeSeriesErrc::SpanExceedsData);
  expect_errc([&] { truncate(ts, 0.0); }, TimeSeriesErrc::InvalidInput);
}

TEST(Truncate, Idempotent) {
  const auto ts = ramp(3001);
  for (double s : {0.5, 3.0, 10.0, 29.99}) {
    const auto once = truncate(ts, s);
    EXPECT_EQ(truncate(once, s), once);
  }
}

TEST(SamplesForSpan, Grid) {
  EXPECT_EQ(samples_for_span(3.0, 0.01), 301u);
  EXPECT_EQ(samples_for_span(30.0, 0.01), 3001u);
  EXPECT_EQ(samples_for_span(10.0, 0.005), 2001u);
}

TEST(Align, Examples) {
  const auto a = ramp(1001);
  const auto b = ramp(301);
  const auto [x, y] = align(a, a);
  EXPECT_EQ(x, a);
  EXPECT_EQ(y, a);
  const auto [p, q] = align(a, b);
  EXPECT_EQ(p.size(), 301u);
  EXPECT_EQ(q.size(), 301u);
  EXPECT_DOUBLE_EQ(p.duration(), 3.0);
  expect_errc([&] { align(a, ramp(10, 0.02)); }, TimeSeriesErrc::IncompatibleSeries);
  expect_errc([&] { align(a, TimeSeries(0, 0.01, {1.0}, ChannelKind::Frequency)); },
              TimeSeriesErrc::IncompatibleSeries);
  expect_errc([&] { align(ramp(10), ramp(10, 0.01, 100.0)); }, TimeSeriesErrc::NoOverlap);
}

TEST(Align, OffsetStart) {
  const auto a = ramp(100, 0.01, 0.0);
  const auto b = ramp(100, 0.01, 0.5);
  const auto [x, y] = align(a, b);
  EXPECT_EQ(x.size(), 50u);
  EXPECT_NEAR(x.start_time(), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(x[0], 50.0);
  EXPECT_DOUBLE_EQ(y[0], 0.0);
}

TEST(SynthSine, ClosedForm) {
  const auto s = synth_sine(1.0, 1.0, 0.0, 2.0, 0.01);
  EXPECT_EQ(s.size(), 201u);
  EXPECT_EQ(s[0], 0.0);
  EXPECT_NEAR(synth_sine(2.5, 1.0, std::numbers::pi / 2, 1.0, 0.01)[0], 2.5, 1e-15);
  EXPECT_NEAR(synth_sine(1.0, 1.0, 0.0, 1.0, 0.25)[1], 1.0, 1e-15);
  const auto t = synth_sine(0.7, 3.3, 0.4, 5.0, 0.003);
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double expected = 0.7 * std::sin(2 * std::numbers::pi * 3.3 * static_cast<double>(k) * 0.003 + 0.4);
    ASSERT_NEAR(t[k], expected, 1e-12);
  }
}

TEST(Perturbation, Examples) {
  const auto s = synth_sine(1.0, 1.0, 0.0, 2.0, 0.01);
  EXPECT_EQ(apply_perturbation(s, {PerturbationKind::AmplitudeShift, 0.0}), s);
  const auto doubled = apply_perturbation(s, {PerturbationKind::AmplitudeStretch, 2.0});
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(doubled[k], 2.0 * s[k]);
  const auto shifted = apply_perturbation(s, {PerturbationKind::AmplitudeShift, 0.5});
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(shifted[k], s[k] + 0.5);
}

TEST(Perturbation, IdentityMagnitudes) {
  const auto s = synth_sine(1.3, 0.7, 0.2, 3.0, 0.01);
  for (Perturbation p : {Perturbation{PerturbationKind::AmplitudeShift, 0.0},
                         Perturbation{PerturbationKind::AmplitudeStretch, 1.0},
                         Perturbation{PerturbationKind::TimeShift, 0.0},
                         Perturbation{PerturbationKind::TimeStretch, 1.0}}) {
    const auto out = apply_perturbation(s, p);
    for (std::size_t k = 0; k < s.size(); ++k) ASSERT_NEAR(out[k], s[k], 1e-12) << to_string(p.kind);
  }
}

TEST(Perturbation, TimeShiftPadsWithBoundary) {
  const auto r = ramp(10);
  const auto delayed = apply_perturbation(r, {PerturbationKind::TimeShift, 3});
  EXPECT_EQ(delayed[0], 0.0);
  EXPECT_EQ(delayed[2], 0.0);
  EXPECT_EQ(delayed[3], 0.0);
  EXPECT_EQ(delayed[9], 6.0);
  const auto advanced = apply_perturbation(r, {PerturbationKind::TimeShift, -2});
  EXPECT_EQ(advanced[0], 2.0);
  EXPECT_EQ(advanced[9], 9.0);
  expect_errc([&] { apply_perturbation(r, {PerturbationKind::TimeShift, 1.5}); }, TimeSeriesErrc::BadMagnitude);
  expect_errc([&] { apply_perturbation(r, {PerturbationKind::TimeShift, 10}); }, TimeSeriesErrc::BadMagnitude);
}

TEST(Perturbation, TimeStretchMatchesDirectSampling) {
  // Linear interpolation error scales with (omega dt)^2, so a fine grid.
  const double dt = 1e-4;
  const auto s = synth_sine(1.0, 1.0, 0.0, 2.0, dt);
  const auto stretched = apply_perturbation(s, {PerturbationKind::TimeStretch, 1.1});
  double worst = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double t = static_cast<double>(k) * dt;
    if (1.1 * t >= 2.0) break;  // beyond the source window the last sample is held
    worst = std::max(worst, std::abs(stretched[k] - std::sin(2 * std::numbers::pi * 1.1 * t)));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Perturbation, BadMagnitudes) {
  const auto s = ramp(10);
  expect_errc([&] { apply_perturbation(s, {PerturbationKind::AmplitudeStretch, 0.0}); }, TimeSeriesErrc::BadMagnitude);
  expect_errc([&] { apply_perturbation(s, {PerturbationKind::TimeStretch, -1.0}); }, TimeSeriesErrc::BadMagnitude);
  expect_errc([&] { apply_perturbation(s, {PerturbationKind::AmplitudeShift, NAN}); }, TimeSeriesErrc::BadMagnitude);
}

TEST(NormalizeProfile, Examples) {
  const std::vector<double> flat{1, 1, 1, 1};
  EXPECT_EQ(normalize_error_profile(flat), (std::vector<double>{0.25, 0.25, 0.25, 0.25}));
  const std::vector<double> single{2, 0, 0, 0};
  EXPECT_EQ(normalize_error_profile(single), (std::vector<double>{1, 0, 0, 0}));
  const std::vector<double> zeros{0, 0};
  expect_errc([&] { normalize_error_profile(zeros); }, TimeSeriesErrc::AllZero);
  const std::vector<double> negative{1, -1};
  expect_errc([&] { normalize_error_profile(negative); }, TimeSeriesErrc::InvalidInput);
}

TEST(NormalizeProfile, SumsToOne) {
  const std::vector<double> v{0.3, 17.0, 1e-9, 4.2, 0.0};
  const auto p = normalize_error_profile(v);
  double sum = 0;
  for (double x : p) {
    EXPECT_GE(x, 0.0);
    sum += x;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Channels, Abbreviations) {
  for (ChannelKind c : kAllChannels) EXPECT_EQ(parse_channel(abbreviation(c)), c);
  EXPECT_TRUE(is_bus_channel(ChannelKind::Frequency));
  EXPECT_FALSE(is_bus_channel(ChannelKind::LineActivePower));
  expect_errc([] { parse_channel("X"); }, TimeSeriesErrc::ParseError);
}

TEST(TimeSeriesIo, CsvRoundTripIsExact) {
  const auto s = synth_sine(1.0, 1.7, 0.3, 1.0, 0.01, ChannelKind::VoltageAngle, "7");
  std::stringstream buf;
  write_csv(buf, s);
  const auto back = read_csv(buf, ChannelKind::VoltageAngle, "7");
  EXPECT_EQ(back.size(), s.size());
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(back[k], s[k]);
  EXPECT_DOUBLE_EQ(back.dt(), 0.01);
}

TEST(TimeSeriesIo, CsvErrors) {
  std::stringstream bad("time,value\n0,1\n0.01,abc\n");
  expect_errc([&] { read_csv(bad, ChannelKind::VoltageMagnitude, ""); }, TimeSeriesErrc::ParseError);
  std::stringstream single("time,value\n0,1\n");
  expect_errc([&] { read_csv(single, ChannelKind::VoltageMagnitude, ""); }, TimeSeriesErrc::ParseError);
  std::stringstream single2("time,value\n0,1\n");
  EXPECT_EQ(read_csv(single2, ChannelKind::VoltageMagnitude, "", 0.01).size(), 1u);
  std::stringstream irregular("time,value\n0,1\n0.01,2\n0.03,3\n");
  expect_errc([&] { read_csv(irregular, ChannelKind::VoltageMagnitude, ""); }, TimeSeriesErrc::ParseError);
}

TEST(TimeSeriesIo, JsonRoundTrip) {
  const auto s = synth_sine(1.0, 1.0, 0.0, 0.5, 0.01, ChannelKind::Frequency, "bus9");
  EXPECT_EQ(from_json(to_json(s)), s);
  expect_errc([] { from_json("{"); }, TimeSeriesErrc::ParseError);
}
