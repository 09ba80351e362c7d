#include "loadcorr/experiment/output.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "loadcorr/timeseries_io.hpp"

namespace loadcorr::exp {

namespace {

std::string num(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

std::string key_fields(const CellKey& k) {
  return format_double(k.span) + ',' + std::string(abbreviation(k.channel)) + ',' +
         std::string(similarity::abbreviation(k.measure));
}

bool wanted(const ExperimentConfig& cfg, const CellKey& k) {
  return std::find(cfg.channels.begin(), cfg.channels.end(), k.channel) != cfg.channels.end() &&
         std::find(cfg.measures.begin(), cfg.measures.end(), k.measure) != cfg.measures.end();
}

}  // namespace

void write_system_records(std::ostream& out, const ExperimentConfig& cfg, std::span<const SystemSample> samples) {
  out << "benchmark,level,fault,pair_seed,fault_bus,accuracy,swapped,span,channel,measure,error,status\n";
  const auto layout = make_grid(Level::System, cfg.spans);
  for (const auto& s : samples) {
    const std::string prefix = std::to_string(s.benchmark) + ',' + std::to_string(s.level) + ',' +
                               std::to_string(s.fault) + ',' + std::to_string(s.pair_seed) + ',' +
                               std::to_string(s.fault_bus) + ',' + format_double(s.accuracy) + ',' +
                               std::to_string(s.swapped) + ',';
    for (const auto& cell : layout.cells) {
      if (!wanted(cfg, cell.key)) continue;
      out << prefix << key_fields(cell.key) << ',';
      if (!s.sim_failure.empty()) {
        out << ",SimFailure\n";
      } else if (auto it = s.errors.find(cell.key); it != s.errors.end()) {
        out << format_double(it->second) << ",ok\n";
      } else if (auto f = s.measure_failures.find(cell.key); f != s.measure_failures.end()) {
        out << ",MeasureFailure\n";
      } else {
        out << ",NotComputed\n";
      }
    }
  }
}

void write_bus_records(std::ostream& out, std::span<const ResponseErrorRecord> records) {
  out << "benchmark,level,fault,pair_seed,fault_bus,accuracy,source,channel,span,measure,model_accurate,error\n";
  for (const auto& r : records) {
    out << r.benchmark << ',' << r.level << ',' << r.fault << ',' << r.pair_seed << ',' << r.fault_bus << ','
        << format_double(r.accuracy) << ',' << r.source << ',' << abbreviation(r.channel) << ','
        << format_double(r.span) << ',' << similarity::abbreviation(r.measure) << ','
        << (r.model_accurate ? 1 : 0) << ',' << format_double(r.error) << '\n';
  }
}

void write_grid(std::ostream& out, const MetricGrid& grid) {
  out << "span,channel,measure,r,p,n,flag\n";
  for (const auto& c : grid.cells) {
    out << key_fields(c.key) << ',' << num(c.r) << ',' << num(c.p) << ',' << c.n << ',' << c.flag() << '\n';
  }
}

void write_stratified_grids(std::ostream& out, const ExperimentConfig& cfg, std::span<const MetricGrid> per_level) {
  out << "accuracy,span,channel,measure,p,n_accurate,n_inaccurate,flag\n";
  for (std::size_t l = 0; l < per_level.size() && l < cfg.accuracy_levels.size(); ++l) {
    for (const auto& c : per_level[l].cells) {
      out << format_double(cfg.accuracy_levels[l]) << ',' << key_fields(c.key) << ',' << num(c.p) << ','
          << c.n_accurate << ',' << c.n_inaccurate << ',' << c.flag() << '\n';
    }
  }
}

void write_ranges(std::ostream& out, std::span<const CellRanges> ranges) {
  out << "span,channel,measure,lo,hi,r,p,n,flag\n";
  for (const auto& cr : ranges) {
    for (const auto& r : cr.ranges) {
      out << key_fields(cr.key) << ',' << format_double(r.range.lo) << ',' << format_double(r.range.hi) << ','
          << num(r.r) << ',' << num(r.p) << ',' << r.n << ',' << to_string(r.status) << '\n';
    }
  }
}

}  // namespace loadcorr::exp
