#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "loadcorr/gridsim/simulate.hpp"

namespace loadcorr::grid {

/// One wide CSV per channel: `time,<source1>,<source2>,...`.
void write_channel_csv(std::ostream& out, const ResponseSet& rs, ChannelKind kind);

/// Writes V.csv, ANG.csv, F.csv, P.csv and Q.csv (channels without series are
/// skipped) and returns the paths written.
std::vector<std::filesystem::path> write_response_csvs(const ResponseSet& rs,
                                                       const std::filesystem::path& dir);

/// Case, disturbance, grid and solver diagnostics, plus the source list of
/// every channel.
nlohmann::json response_metadata(const ResponseSet& rs);

}  // namespace loadcorr::grid
