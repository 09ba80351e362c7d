#include "loadcorr/experiment/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "loadcorr/stats.hpp"

namespace loadcorr::exp {

std::string_view to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Ok: return "Ok";
    case CellStatus::NotRequested: return "NotRequested";
    case CellStatus::ZeroVariance: return "ZeroVariance";
    case CellStatus::InsufficientSamples: return "InsufficientSamples";
    case CellStatus::SimFailure: return "SimFailure";
    case CellStatus::ZeroPooledVariance: return "ZeroPooledVariance";
  }
  return "?";
}

bool GridCell::strong() const {
  return ok() && std::isfinite(r) && stats::classify(r) == stats::StrengthClass::StrongNegative;
}

bool GridCell::significant() const { return ok() && stats::is_significant(p); }

std::string GridCell::flag() const {
  if (!ok()) return std::string(to_string(status));
  if (strong() && significant()) return "strong+significant";
  if (strong()) return "strong";
  if (significant()) return "significant";
  return "none";
}

const GridCell& MetricGrid::at(const CellKey& key) const {
  for (const auto& c : cells) {
    if (c.key == key) return c;
  }
  throw std::out_of_range("no such grid cell");
}

std::size_t MetricGrid::significant_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const GridCell& c) { return c.significant(); }));
}

std::size_t MetricGrid::strong_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const GridCell& c) { return c.strong(); }));
}

MetricGrid make_grid(Level level, const std::vector<double>& spans) {
  MetricGrid g;
  g.level = level;
  g.spans = spans;
  const std::span<const ChannelKind> channels =
      level == Level::System ? std::span<const ChannelKind>(kAllChannels) : std::span<const ChannelKind>(kBusChannels);
  for (double s : spans) {
    for (ChannelKind ch : channels) {
      for (Measure m : similarity::kAllMeasures) {
        GridCell c;
        c.key = {s, ch, m};
        g.cells.push_back(c);
      }
    }
  }
  return g;
}

namespace {

bool requested(const ExperimentConfig& cfg, const CellKey& key) {
  return std::find(cfg.channels.begin(), cfg.channels.end(), key.channel) != cfg.channels.end() &&
         std::find(cfg.measures.begin(), cfg.measures.end(), key.measure) != cfg.measures.end();
}

void fill_correlation(GridCell& cell, std::span<const double> x, std::span<const double> y) {
  cell.n = x.size();
  if (x.size() < 3) {
    cell.status = CellStatus::InsufficientSamples;
    return;
  }
  try {
    const auto res = stats::pearson(x, y);
    cell.status = CellStatus::Ok;
    cell.r = res.r;
    cell.p = res.p;
  } catch (const stats::StatsError& e) {
    if (e.code() != stats::StatsErrc::ZeroVariance) throw;
    cell.status = CellStatus::ZeroVariance;
  }
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

MetricGrid system_grid_from_samples(const ExperimentConfig& cfg, std::span<const SystemSample> samples) {
  auto g = make_grid(Level::System, cfg.spans);
  for (auto& cell : g.cells) {
    if (!requested(cfg, cell.key)) continue;
    std::vector<double> acc, err;
    std::size_t sim_failed = 0;
    for (const auto& s : samples) {
      if (!s.sim_failure.empty()) {
        ++sim_failed;
        continue;
      }
      auto it = s.errors.find(cell.key);
      if (it == s.errors.end()) {
        ++cell.n_failed;
        continue;
      }
      acc.push_back(s.accuracy);
      err.push_back(it->second);
    }
    cell.n_failed += sim_failed;
    fill_correlation(cell, acc, err);
    if (!samples.empty() && sim_failed == samples.size()) cell.status = CellStatus::SimFailure;
  }
  return g;
}

MetricGrid bus_grid_from_records(const ExperimentConfig& cfg, std::span<const ResponseErrorRecord> records,
                                 std::size_t failed_samples, std::optional<int> level) {
  auto g = make_grid(Level::Bus, cfg.spans);
  std::map<CellKey, std::pair<std::vector<double>, std::vector<double>>> bins;
  for (const auto& r : records) {
    if (level && r.level != *level) continue;
    auto& bin = bins[CellKey{r.span, r.channel, r.measure}];
    (r.model_accurate ? bin.first : bin.second).push_back(r.error);
  }
  for (auto& cell : g.cells) {
    if (!requested(cfg, cell.key)) continue;
    cell.n_failed = failed_samples;
    auto it = bins.find(cell.key);
    if (it == bins.end()) {
      cell.status = failed_samples > 0 ? CellStatus::SimFailure : CellStatus::InsufficientSamples;
      continue;
    }
    const auto& [a, b] = it->second;
    cell.n_accurate = a.size();
    cell.n_inaccurate = b.size();
    cell.n = a.size() + b.size();
    if (a.size() < 2 || b.size() < 2) {
      cell.status = CellStatus::InsufficientSamples;
      continue;
    }
    try {
      cell.p = stats::two_sample_ttest(a, b, !cfg.welch).p;
      cell.status = CellStatus::Ok;
    } catch (const stats::StatsError& e) {
      if (e.code() != stats::StatsErrc::ZeroPooledVariance) throw;
      // Both bins constant: the statistic diverges unless the means agree.
      if (mean(a) != mean(b)) {
        cell.p = 0.0;
        cell.status = CellStatus::Ok;
      } else {
        cell.status = CellStatus::ZeroPooledVariance;
      }
    }
  }
  return g;
}

std::vector<RangeResult> range_correlations(std::span<const double> accuracy, std::span<const double> error,
                                            std::span<const AccuracyRange> ranges) {
  if (accuracy.size() != error.size()) {
    throw ExperimentError(ExperimentErrc::InvalidInput, "accuracy and error lengths differ");
  }
  for (std::size_t i = 1; i < ranges.size(); ++i) {
    if (!(ranges[i].lo > ranges[i - 1].hi)) {
      throw ExperimentError(ExperimentErrc::InvalidInput, "accuracy ranges overlap or are unsorted");
    }
  }
  std::vector<RangeResult> out;
  for (const auto& range : ranges) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < accuracy.size(); ++i) {
      if (accuracy[i] >= range.lo && accuracy[i] <= range.hi) {
        x.push_back(accuracy[i]);
        y.push_back(error[i]);
      }
    }
    GridCell tmp;
    fill_correlation(tmp, x, y);
    out.push_back({range, tmp.status, tmp.r, tmp.p, tmp.n});
  }
  return out;
}

std::vector<CellRanges> system_range_correlations(const ExperimentConfig& cfg,
                                                  std::span<const SystemSample> samples) {
  std::vector<CellRanges> out;
  for (const auto& cell : make_grid(Level::System, cfg.spans).cells) {
    if (!requested(cfg, cell.key)) continue;
    std::vector<double> acc, err;
    for (const auto& s : samples) {
      if (!s.sim_failure.empty()) continue;
      auto it = s.errors.find(cell.key);
      if (it == s.errors.end()) continue;
      acc.push_back(s.accuracy);
      err.push_back(it->second);
    }
    out.push_back({cell.key, range_correlations(acc, err, cfg.accuracy_ranges)});
  }
  return out;
}

}  // namespace loadcorr::exp
