#include "loadcorr/timeseries_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace loadcorr {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const TimeSeries& ts) {
  out << "time,value\n";
  for (std::size_t k = 0; k < ts.size(); ++k) {
    out << format_double(ts.time_at(k)) << ',' << format_double(ts[k]) << '\n';
  }
}

namespace {

double parse_number(std::string_view text, std::size_t line) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw TimeSeriesError(TimeSeriesErrc::ParseError,
                          "line " + std::to_string(line) + ": bad number '" + std::string(text) + "'");
  }
  return v;
}

// Searches a few ulps around the naive difference for the step that
// reproduces every time stamp as start + k*dt.
std::optional<double> recover_step(const std::vector<double>& times) {
  const double start = times.front();
  double candidate = times[1] - times[0];
  for (int i = 0; i < 64; ++i) candidate = std::nextafter(candidate, 0.0);
  for (int i = 0; i < 129; ++i, candidate = std::nextafter(candidate, INFINITY)) {
    bool ok = candidate > 0.0;
    for (std::size_t k = 1; ok && k < times.size(); ++k) {
      ok = start + static_cast<double>(k) * candidate == times[k];
    }
    if (ok) return candidate;
  }
  return std::nullopt;
}

}  // namespace

TimeSeries read_csv(std::istream& in, ChannelKind channel, SourceId source,
                    std::optional<double> dt_hint) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> times;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("time", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw TimeSeriesError(TimeSeriesErrc::ParseError,
                            "line " + std::to_string(line_no) + ": expected 'time,value'");
    }
    times.push_back(parse_number(std::string_view(line).substr(0, comma), line_no));
    values.push_back(parse_number(std::string_view(line).substr(comma + 1), line_no));
  }
  if (values.empty()) {
    throw TimeSeriesError(TimeSeriesErrc::ParseError, "no samples in CSV");
  }
  double dt = 0.0;
  if (values.size() == 1) {
    if (!dt_hint) {
      throw TimeSeriesError(TimeSeriesErrc::ParseError, "single-sample CSV needs an explicit dt");
    }
    dt = *dt_hint;
  } else {
    const auto step = recover_step(times);
    if (!step) {
      throw TimeSeriesError(TimeSeriesErrc::ParseError, "time column is not uniformly sampled");
    }
    dt = *step;
  }
  return TimeSeries(times.front(), dt, std::move(values), channel, std::move(source));
}

std::string to_json(const TimeSeries& ts) {
  nlohmann::json j;
  j["start_time"] = ts.start_time();
  j["dt"] = ts.dt();
  j["channel"] = std::string(abbreviation(ts.channel()));
  j["source"] = ts.source();
  j["values"] = std::vector<double>(ts.values().begin(), ts.values().end());
  return j.dump();
}

TimeSeries from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    return TimeSeries(j.at("start_time").get<double>(), j.at("dt").get<double>(),
                      j.at("values").get<std::vector<double>>(),
                      parse_channel(j.at("channel").get<std::string>()),
                      j.at("source").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw TimeSeriesError(TimeSeriesErrc::ParseError, std::string("time series JSON: ") + e.what());
  }
}

}  // namespace loadcorr
