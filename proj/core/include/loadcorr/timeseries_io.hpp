#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "loadcorr/timeseries.hpp"

namespace loadcorr {

/// Formats a double with enough digits to round-trip bit-exactly.
std::string format_double(double v);

/// `time,value` CSV with a header row. Times are start + k*dt.
void write_csv(std::ostream& out, const TimeSeries& ts);
/// Reads `time,value` CSV. The step is recovered exactly from the time column;
/// a single-row file needs `dt_hint`. Throws TimeSeriesError(ParseError).
TimeSeries read_csv(std::istream& in, ChannelKind channel, SourceId source,
                    std::optional<double> dt_hint = std::nullopt);

/// `{start_time, dt, channel, source, values}`.
std::string to_json(const TimeSeries& ts);
TimeSeries from_json(const std::string& text);

}  // namespace loadcorr
