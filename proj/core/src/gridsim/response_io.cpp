#include "loadcorr/gridsim/response_io.hpp"

#include <fstream>
#include <ostream>

#include "loadcorr/timeseries_io.hpp"

namespace loadcorr::grid {

void write_channel_csv(std::ostream& out, const ResponseSet& rs, ChannelKind kind) {
  const auto& group = rs.of(kind);
  out << "time";
  for (const auto& ts : group) out << ',' << ts.source();
  out << '\n';
  if (group.empty()) return;
  const TimeSeries& first = group.front();
  for (std::size_t k = 0; k < first.size(); ++k) {
    out << format_double(first.time_at(k));
    for (const auto& ts : group) out << ',' << format_double(ts[k]);
    out << '\n';
  }
}

std::vector<std::filesystem::path> write_response_csvs(const ResponseSet& rs,
                                                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (ChannelKind kind : kAllChannels) {
    if (rs.of(kind).empty()) continue;
    const auto path = dir / (std::string(abbreviation(kind)) + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_channel_csv(out, rs, kind);
    if (!out) throw std::runtime_error("write failed for " + path.string());
    written.push_back(path);
  }
  return written;
}

nlohmann::json response_metadata(const ResponseSet& rs) {
  nlohmann::json j;
  j["case"] = rs.case_name;
  j["disturbance"] = describe(rs.disturbance);
  j["dt"] = rs.dt;
  j["span"] = rs.span;
  j["seed"] = rs.seed;
  j["samples"] = rs.samples();
  j["max_power_mismatch"] = rs.max_power_mismatch;
  j["slip_range"] = {rs.min_slip, rs.max_slip};
  j["max_iterations_per_step"] = rs.max_iterations_used;
  nlohmann::json channels = nlohmann::json::object();
  for (ChannelKind kind : kAllChannels) channels[std::string(abbreviation(kind))] = rs.sources(kind);
  j["channels"] = channels;
  return j;
}

}  // namespace loadcorr::grid
