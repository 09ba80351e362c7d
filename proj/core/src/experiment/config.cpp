#include "loadcorr/experiment/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace loadcorr::exp {

using nlohmann::json;

std::string_view to_string(ExperimentErrc code) {
  switch (code) {
    case ExperimentErrc::InvalidConfig: return "InvalidConfig";
    case ExperimentErrc::TooManyClms: return "TooManyClms";
    case ExperimentErrc::MixedKeys: return "MixedKeys";
    case ExperimentErrc::InsufficientSamples: return "InsufficientSamples";
    case ExperimentErrc::InvalidInput: return "InvalidInput";
  }
  return "?";
}

namespace {

std::string join_lines(const std::vector<std::string>& v) {
  std::string s = "invalid experiment config:";
  for (const auto& line : v) s += "\n  - " + line;
  return s;
}

class Reader {
 public:
  explicit Reader(const json& root) : root_(root) {}

  std::vector<std::string> errors;

  bool has(const char* key) const { return root_.contains(key); }

  template <typename F>
  void with(const char* key, F&& f) {
    if (!root_.contains(key)) return;
    try {
      f(root_.at(key));
    } catch (const std::exception& e) {
      errors.push_back(std::string(key) + ": " + e.what());
    }
  }

  void integer(const char* key, int& out) {
    with(key, [&](const json& v) {
      if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
      out = v.get<int>();
    });
  }

  void number(const char* key, double& out) {
    with(key, [&](const json& v) {
      if (!v.is_number()) throw std::invalid_argument("expected a number");
      out = v.get<double>();
    });
  }

  void numbers(const char* key, std::vector<double>& out) {
    with(key, [&](const json& v) {
      if (!v.is_array()) throw std::invalid_argument("expected an array of numbers");
      std::vector<double> tmp;
      for (const auto& e : v) {
        if (!e.is_number()) throw std::invalid_argument("expected an array of numbers");
        tmp.push_back(e.get<double>());
      }
      out = std::move(tmp);
    });
  }

  void strings(const char* key, std::vector<std::string>& out) {
    with(key, [&](const json& v) {
      if (!v.is_array()) throw std::invalid_argument("expected an array of strings");
      std::vector<std::string> tmp;
      for (const auto& e : v) {
        if (!e.is_string()) throw std::invalid_argument("expected an array of strings");
        tmp.push_back(e.get<std::string>());
      }
      out = std::move(tmp);
    });
  }

 private:
  const json& root_;
};

const std::set<std::string> kKnownKeys = {
    "n_benchmark_systems", "n_fault_locations", "accuracy_levels", "spans",     "measures",
    "channels",            "clm_count",         "dt",              "master_seed", "dtw_window",
    "disturbance",         "t_apply",           "t_clear",         "fault_admittance",
    "bus_level_binning",   "ttest",             "accuracy_ranges", "branches",
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : ExperimentError(ExperimentErrc::InvalidConfig, join_lines(violations)),
      violations_(std::move(violations)) {}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }
  if (!root.is_object()) throw ConfigError({"top level must be an object"});

  ExperimentConfig cfg;
  Reader r(root);
  for (const auto& [key, value] : root.items()) {
    if (!kKnownKeys.count(key)) r.errors.push_back(key + ": unknown field");
  }
  r.integer("n_benchmark_systems", cfg.n_benchmark_systems);
  r.integer("n_fault_locations", cfg.n_fault_locations);
  r.numbers("accuracy_levels", cfg.accuracy_levels);
  r.numbers("spans", cfg.spans);
  r.integer("clm_count", cfg.clm_count);
  r.number("dt", cfg.dt);
  r.number("t_apply", cfg.t_apply);
  r.number("t_clear", cfg.t_clear);
  r.number("fault_admittance", cfg.fault_admittance);
  r.strings("branches", cfg.branches);
  r.with("master_seed", [&](const json& v) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw std::invalid_argument("expected a non-negative integer");
    }
    cfg.master_seed = v.get<std::uint64_t>();
  });
  r.with("measures", [&](const json& v) {
    std::vector<std::string> names;
    if (!v.is_array()) throw std::invalid_argument("expected an array of measure names");
    cfg.measures.clear();
    for (const auto& e : v) {
      if (!e.is_string()) throw std::invalid_argument("expected an array of measure names");
      cfg.measures.push_back(similarity::parse_measure(e.get<std::string>()));
    }
  });
  r.with("channels", [&](const json& v) {
    if (!v.is_array()) throw std::invalid_argument("expected an array of channel names");
    cfg.channels.clear();
    for (const auto& e : v) {
      if (!e.is_string()) throw std::invalid_argument("expected an array of channel names");
      cfg.channels.push_back(parse_channel(e.get<std::string>()));
    }
  });
  r.with("dtw_window", [&](const json& v) {
    if (v.is_null()) {
      cfg.dtw_window.reset();
    } else if (v.is_number_integer() && v.get<long long>() >= 0) {
      cfg.dtw_window = v.get<std::size_t>();
    } else {
      throw std::invalid_argument("expected a non-negative integer or null");
    }
  });
  r.with("disturbance", [&](const json& v) {
    const std::string s = v.is_string() ? v.get<std::string>() : "";
    if (s == "bus_fault") cfg.disturbance = DisturbanceKind::BusFault;
    else if (s == "generator_outage") cfg.disturbance = DisturbanceKind::GeneratorOutage;
    else throw std::invalid_argument("expected \"bus_fault\" or \"generator_outage\"");
  });
  r.with("bus_level_binning", [&](const json& v) {
    const std::string s = v.is_string() ? v.get<std::string>() : "";
    if (s == "pooled") cfg.stratified = false;
    else if (s == "stratified") cfg.stratified = true;
    else throw std::invalid_argument("expected \"pooled\" or \"stratified\"");
  });
  r.with("ttest", [&](const json& v) {
    const std::string s = v.is_string() ? v.get<std::string>() : "";
    if (s == "student") cfg.welch = false;
    else if (s == "welch") cfg.welch = true;
    else throw std::invalid_argument("expected \"student\" or \"welch\"");
  });
  r.with("accuracy_ranges", [&](const json& v) {
    if (!v.is_array()) throw std::invalid_argument("expected an array of [lo, hi] pairs");
    cfg.accuracy_ranges.clear();
    for (const auto& e : v) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw std::invalid_argument("expected an array of [lo, hi] pairs");
      }
      cfg.accuracy_ranges.push_back({e[0].get<double>(), e[1].get<double>()});
    }
  });
  if (!r.errors.empty()) throw ConfigError(r.errors);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["n_benchmark_systems"] = cfg.n_benchmark_systems;
  j["n_fault_locations"] = cfg.n_fault_locations;
  j["accuracy_levels"] = cfg.accuracy_levels;
  j["spans"] = cfg.spans;
  j["measures"] = json::array();
  for (Measure m : cfg.measures) j["measures"].push_back(std::string(similarity::abbreviation(m)));
  j["channels"] = json::array();
  for (ChannelKind c : cfg.channels) j["channels"].push_back(std::string(abbreviation(c)));
  j["clm_count"] = cfg.clm_count;
  j["dt"] = cfg.dt;
  j["master_seed"] = cfg.master_seed;
  j["dtw_window"] = cfg.dtw_window ? json(*cfg.dtw_window) : json(nullptr);
  j["disturbance"] = cfg.disturbance == DisturbanceKind::BusFault ? "bus_fault" : "generator_outage";
  j["t_apply"] = cfg.t_apply;
  j["t_clear"] = cfg.t_clear;
  j["fault_admittance"] = cfg.fault_admittance;
  j["bus_level_binning"] = cfg.stratified ? "stratified" : "pooled";
  j["ttest"] = cfg.welch ? "welch" : "student";
  j["accuracy_ranges"] = json::array();
  for (const auto& r : cfg.accuracy_ranges) j["accuracy_ranges"].push_back({r.lo, r.hi});
  j["branches"] = cfg.branches;
  return j;
}

std::vector<std::string> violations(const ExperimentConfig& cfg, Level level, const grid::NetworkCase* c) {
  std::vector<std::string> v;
  if (cfg.n_benchmark_systems < 1) v.push_back("n_benchmark_systems: must be >= 1");
  if (cfg.n_fault_locations < 1) v.push_back("n_fault_locations: must be >= 1");
  if (cfg.clm_count < 0) v.push_back("clm_count: must be >= 0");
  if (cfg.accuracy_levels.empty()) v.push_back("accuracy_levels: must not be empty");
  for (double a : cfg.accuracy_levels) {
    if (!(a >= 0.0 && a <= 1.0)) {
      v.push_back("accuracy_levels: " + std::to_string(a) + " is outside [0, 1]");
    }
  }
  if (!std::is_sorted(cfg.accuracy_levels.begin(), cfg.accuracy_levels.end()) ||
      std::adjacent_find(cfg.accuracy_levels.begin(), cfg.accuracy_levels.end()) !=
          cfg.accuracy_levels.end()) {
    v.push_back("accuracy_levels: must be strictly increasing");
  }
  if (cfg.spans.empty()) v.push_back("spans: must not be empty");
  for (double s : cfg.spans) {
    if (!(s > 0.0) || !std::isfinite(s)) v.push_back("spans: every span must be positive");
  }
  if (std::adjacent_find(cfg.spans.begin(), cfg.spans.end(), std::greater_equal<>()) != cfg.spans.end()) {
    v.push_back("spans: must be strictly increasing");
  }
  if (cfg.measures.empty()) v.push_back("measures: must not be empty");
  if (std::set<Measure>(cfg.measures.begin(), cfg.measures.end()).size() != cfg.measures.size()) {
    v.push_back("measures: duplicate entry");
  }
  if (cfg.channels.empty()) v.push_back("channels: must not be empty");
  if (std::set<ChannelKind>(cfg.channels.begin(), cfg.channels.end()).size() != cfg.channels.size()) {
    v.push_back("channels: duplicate entry");
  }
  if (level == Level::Bus) {
    for (ChannelKind ch : cfg.channels) {
      if (!is_bus_channel(ch)) {
        v.push_back("channels: " + std::string(abbreviation(ch)) +
                    " is a line-flow channel and is not allowed at bus level");
      }
    }
  }
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    v.push_back("dt: must be positive");
  } else if (!cfg.spans.empty() && cfg.dt > cfg.spans.front()) {
    v.push_back("dt: larger than the shortest span");
  }
  if (cfg.disturbance == DisturbanceKind::BusFault) {
    if (!(cfg.t_apply >= 0.0)) v.push_back("t_apply: must be >= 0");
    if (!(cfg.t_clear > cfg.t_apply)) v.push_back("t_clear: must be greater than t_apply");
    if (!(cfg.fault_admittance > 0.0)) v.push_back("fault_admittance: must be positive");
  } else if (!(cfg.t_apply >= 0.0)) {
    v.push_back("t_apply: must be >= 0");
  }
  for (std::size_t i = 0; i < cfg.accuracy_ranges.size(); ++i) {
    const auto& r = cfg.accuracy_ranges[i];
    if (!(r.lo >= 0.0 && r.hi <= 1.0 && r.lo <= r.hi)) {
      v.push_back("accuracy_ranges[" + std::to_string(i) + "]: need 0 <= lo <= hi <= 1");
    }
    if (i > 0 && !(r.lo > cfg.accuracy_ranges[i - 1].hi)) {
      v.push_back("accuracy_ranges[" + std::to_string(i) + "]: overlaps or precedes the previous range");
    }
  }
  if (c) {
    const auto loads = static_cast<int>(c->loads.size());
    if (cfg.clm_count > loads) {
      v.push_back("clm_count: " + std::to_string(cfg.clm_count) + " exceeds the " + std::to_string(loads) +
                  " load buses of case '" + c->name + "'");
    }
    if (cfg.disturbance == DisturbanceKind::BusFault) {
      const auto candidates = static_cast<int>(c->buses.size()) - 1;
      if (cfg.n_fault_locations > candidates) {
        v.push_back("n_fault_locations: case has only " + std::to_string(candidates) + " non-slack buses");
      }
    } else if (cfg.n_fault_locations > static_cast<int>(c->machines.size())) {
      v.push_back("n_fault_locations: case has only " + std::to_string(c->machines.size()) +
                  " machines to trip");
    }
    for (const auto& name : cfg.branches) {
      const bool found = std::any_of(c->branches.begin(), c->branches.end(),
                                     [&](const grid::Branch& b) { return b.name == name; });
      if (!found) v.push_back("branches: no branch named '" + name + "'");
    }
  }
  return v;
}

void validate(const ExperimentConfig& cfg, Level level, const grid::NetworkCase* c) {
  auto v = violations(cfg, level, c);
  if (!v.empty()) throw ConfigError(std::move(v));
}

}  // namespace loadcorr::exp
