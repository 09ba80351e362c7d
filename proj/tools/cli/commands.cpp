#include "commands.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <tuple>

#include "loadcorr/experiment/output.hpp"
#include "loadcorr/experiment/runner.hpp"
#include "loadcorr/gridsim/case_io.hpp"
#include "loadcorr/gridsim/cases.hpp"
#include "loadcorr/gridsim/response_io.hpp"
#include "loadcorr/gridsim/simulate.hpp"
#include "loadcorr/similarity_demo.hpp"
#include "loadcorr/timeseries_io.hpp"

#ifndef LOADCORR_VERSION
#define LOADCORR_VERSION "0.0.0"
#endif

namespace loadcorr::cli {

using nlohmann::json;

std::string tool_version() { return LOADCORR_VERSION; }

namespace {

using Clock = std::chrono::steady_clock;

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t count_rows(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

json base_manifest(const std::string& command) {
  return {{"tool", kToolName}, {"version", tool_version()}, {"command", command}, {"started", utc_now()}};
}

void finish_manifest(const fs::path& dir, json manifest, const json& outputs) {
  manifest["outputs"] = outputs;
  manifest["finished"] = utc_now();
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
}

void prepare_dir(const fs::path& dir) {
  if (dir.empty()) throw UsageError("--out is required");
  fs::create_directories(dir);
}

json case_info(const fs::path& path, const grid::NetworkCase& c) {
  return {{"path", path.string()}, {"name", c.name}, {"fnv1a", grid::content_hash(read_file(path))}};
}

std::string fmt(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void print_grid(std::ostream& log, const exp::MetricGrid& g) {
  const bool sys = g.level == exp::Level::System;
  log << std::left << std::setw(6) << "span" << std::setw(5) << "ch" << std::setw(5) << "msr";
  if (sys) log << std::right << std::setw(11) << "r";
  log << std::right << std::setw(12) << "p" << std::setw(7) << "n" << "  flag\n";
  for (const auto& c : g.cells) {
    log << std::left << std::setw(6) << format_double(c.key.span) << std::setw(5) << abbreviation(c.key.channel)
        << std::setw(5) << similarity::abbreviation(c.key.measure) << std::right;
    std::ostringstream r, p;
    if (std::isfinite(c.r)) r << std::fixed << std::setprecision(4) << c.r;
    if (std::isfinite(c.p)) p << std::scientific << std::setprecision(3) << c.p;
    if (sys) log << std::setw(11) << r.str();
    log << std::setw(12) << p.str() << std::setw(7) << c.n << "  " << c.flag() << '\n';
  }
  log << "significant: " << g.significant_count() << '/' << g.cells.size() << '\n';
  if (sys) log << "strong: " << g.strong_count() << '/' << g.cells.size() << '\n';
}

}  // namespace

json write_output(const fs::path& dir, const std::string& name, const std::string& text) {
  std::ofstream out(dir / name, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return {{"file", name}, {"fnv1a", grid::content_hash(text)}, {"bytes", text.size()}, {"rows", count_rows(text)}};
}

std::vector<std::string> verify_outputs(const fs::path& dir) {
  const auto manifest = json::parse(read_file(dir / "manifest.json"));
  std::vector<std::string> bad;
  for (const auto& o : manifest.at("outputs")) {
    const auto name = o.at("file").get<std::string>();
    std::string text;
    try {
      text = read_file(dir / name);
    } catch (const std::exception&) {
      bad.push_back(name);
      continue;
    }
    if (grid::content_hash(text) != o.at("fnv1a").get<std::string>() ||
        count_rows(text) != o.at("rows").get<std::size_t>()) {
      bad.push_back(name);
    }
  }
  return bad;
}

void demo_similarity(const fs::path& out_dir, std::ostream& log) {
  prepare_dir(out_dir);
  auto manifest = base_manifest("demo-similarity");
  const similarity::DemoSettings settings;
  const auto d = similarity::similarity_demo(settings);

  static const char* kScenarios[] = {"amplitude_shift", "amplitude_stretch", "time_shift", "time_stretch"};
  std::ostringstream profiles, raw, series;
  profiles << "measure";
  raw << "measure";
  series << "time,base";
  for (const char* s : kScenarios) {
    profiles << ',' << s;
    raw << ',' << s;
    series << ',' << s;
  }
  profiles << '\n';
  raw << '\n';
  series << '\n';
  for (const auto m : similarity::kAllMeasures) {
    profiles << similarity::abbreviation(m);
    raw << similarity::abbreviation(m);
    for (std::size_t i = 0; i < 4; ++i) {
      profiles << ',' << format_double(d.profile.at(m)[i]);
      raw << ',' << format_double(d.raw.at(m)[i]);
    }
    profiles << '\n';
    raw << '\n';
  }
  for (std::size_t k = 0; k < d.base.size(); ++k) {
    series << format_double(d.base.time_at(k)) << ',' << format_double(d.base[k]);
    for (const auto& p : d.perturbed) series << ',' << format_double(p[k]);
    series << '\n';
  }

  json outputs = json::array();
  outputs.push_back(write_output(out_dir, "demo_profiles.csv", profiles.str()));
  outputs.push_back(write_output(out_dir, "demo_raw.csv", raw.str()));
  outputs.push_back(write_output(out_dir, "demo_series.csv", series.str()));
  manifest["settings"] = {{"amplitude", settings.amplitude},
                          {"frequency", settings.frequency},
                          {"span", settings.span},
                          {"dt", settings.dt},
                          {"amplitude_shift", settings.amplitude_shift},
                          {"amplitude_stretch", settings.amplitude_stretch},
                          {"time_shift_samples", settings.time_shift},
                          {"time_stretch", settings.time_stretch},
                          {"dtw_window", settings.dtw_window}};
  finish_manifest(out_dir, manifest, outputs);

  log << std::left << std::setw(6) << "msr";
  for (const char* s : kScenarios) log << std::setw(19) << s;
  log << '\n';
  for (const auto m : similarity::kAllMeasures) {
    log << std::setw(6) << similarity::abbreviation(m);
    for (double v : d.profile.at(m)) {
      std::ostringstream os;
      os << std::fixed << std::setprecision(4) << v;
      log << std::setw(19) << os.str();
    }
    log << '\n';
  }
}

void simulate(const SimulateArgs& args, std::ostream& log) {
  if (args.fault_bus && args.trip_machine) throw UsageError("--fault-bus and --trip-machine are exclusive");
  const auto t0 = Clock::now();
  const auto c = grid::load_case(args.case_path);
  prepare_dir(args.out_dir);
  auto manifest = base_manifest("simulate");
  manifest["case"] = case_info(args.case_path, c);

  grid::Disturbance d = grid::NoDisturbance{};
  if (args.fault_bus) {
    d = grid::BusFault{*args.fault_bus, args.t_apply, args.t_clear, args.fault_admittance};
  } else if (args.trip_machine) {
    d = grid::GeneratorOutage{*args.trip_machine, args.t_apply};
  }
  grid::SimulationOptions opts;
  opts.span = args.span;
  opts.dt = args.dt;
  opts.seed = args.seed;
  opts.branches = args.branches;
  const auto rs = grid::run_simulation(c, d, opts);
  const double sim_seconds = seconds_since(t0);

  json outputs = json::array();
  for (ChannelKind kind : kAllChannels) {
    if (rs.of(kind).empty()) continue;
    std::ostringstream os;
    grid::write_channel_csv(os, rs, kind);
    outputs.push_back(write_output(args.out_dir, std::string(abbreviation(kind)) + ".csv", os.str()));
  }
  manifest["response"] = grid::response_metadata(rs);
  manifest["durations"] = {{"simulate", sim_seconds}};
  finish_manifest(args.out_dir, manifest, outputs);

  log << "case " << c.name << ", " << grid::describe(d) << ", " << rs.samples() << " samples\n";
  log << "max power mismatch " << rs.max_power_mismatch << " pu, max iterations per step "
      << rs.max_iterations_used << '\n';
}

void gen_case(const std::vector<std::string>& names, const fs::path& out_dir, std::ostream& log) {
  std::vector<grid::NetworkCase> cases;
  for (const auto& name : names) {
    if (name == "ninebus") {
      cases.push_back(grid::make_nine_bus_case());
    } else if (name == "rts73") {
      cases.push_back(grid::make_rts73_case());
    } else {
      throw UsageError("unknown case '" + name + "' (expected ninebus or rts73)");
    }
  }
  prepare_dir(out_dir);
  auto manifest = base_manifest("gen-case");
  json outputs = json::array();
  for (const auto& c : cases) {
    outputs.push_back(write_output(out_dir, c.name + ".json", grid::case_to_json(c)));
    log << "wrote " << (out_dir / (c.name + ".json")).string() << ": " << c.buses.size() << " buses, "
        << c.branches.size() << " branches, " << c.machines.size() << " machines, " << c.loads.size()
        << " loads\n";
  }
  finish_manifest(out_dir, manifest, outputs);
}

void run(const RunArgs& args, std::ostream& log) {
  const auto t0 = Clock::now();
  auto cfg = exp::load_config(args.config_path.string());
  if (args.seed) cfg.master_seed = *args.seed;
  const auto c = grid::load_case(args.case_path);
  exp::validate(cfg, args.level, &c);
  prepare_dir(args.out_dir);

  const bool sys = args.level == exp::Level::System;
  auto manifest = base_manifest(sys ? "run system" : "run bus");
  manifest["level"] = sys ? "system" : "bus";
  manifest["case"] = case_info(args.case_path, c);
  manifest["config"] = exp::to_json(cfg);
  manifest["master_seed"] = cfg.master_seed;
  manifest["oracle"] = args.oracle;
  manifest["jobs"] = args.jobs;

  exp::RunOptions opts;
  opts.jobs = args.jobs;
  opts.oracle = args.oracle;
  std::size_t last_decile = 0;
  if (!args.quiet) {
    opts.progress = [&](std::size_t done, std::size_t total) {
      const std::size_t decile = done * 10 / total;
      if (decile > last_decile || done == total) {
        last_decile = decile;
        log << "  " << done << '/' << total << " jobs done\n" << std::flush;
      }
    };
  }
  const auto result = exp::run_experiment(cfg, c, sys ? exp::Which::System : exp::Which::Bus, opts);
  const auto t_write = Clock::now();

  json outputs = json::array();
  const exp::MetricGrid* grid = nullptr;
  if (sys) {
    const auto& s = *result.system;
    std::ostringstream records, grid_csv, ranges;
    exp::write_system_records(records, cfg, s.samples);
    exp::write_grid(grid_csv, s.grid);
    exp::write_ranges(ranges, s.ranges);
    outputs.push_back(write_output(args.out_dir, "records.csv", records.str()));
    outputs.push_back(write_output(args.out_dir, "system_grid.csv", grid_csv.str()));
    outputs.push_back(write_output(args.out_dir, "ranges.csv", ranges.str()));
    grid = &s.grid;
  } else {
    const auto& b = *result.bus;
    std::ostringstream records, grid_csv;
    exp::write_bus_records(records, b.records);
    exp::write_grid(grid_csv, b.grid);
    outputs.push_back(write_output(args.out_dir, "records.csv", records.str()));
    outputs.push_back(write_output(args.out_dir, "bus_grid.csv", grid_csv.str()));
    if (!b.per_level.empty()) {
      std::ostringstream strat;
      exp::write_stratified_grids(strat, cfg, b.per_level);
      outputs.push_back(write_output(args.out_dir, "bus_grid_stratified.csv", strat.str()));
    }
    grid = &b.grid;
  }
  if (args.oracle && sys) {
    const auto o = exp::oracle_sanity(cfg, c);
    manifest["oracle_sanity"] = {{"r", o.r}, {"p", o.p}, {"n", o.n}};
    log << "oracle_sanity: r = " << format_double(o.r) << ", p = " << format_double(o.p) << ", n = " << o.n
        << '\n';
  }
  manifest["stats"] = {{"simulations", result.stats.simulations},
                       {"simulation_failures", result.stats.simulation_failures}};
  manifest["summary"] = {{"cells", grid->cells.size()},
                         {"significant", grid->significant_count()},
                         {"strong", grid->strong_count()}};
  manifest["durations"] = {{"experiment", result.stats.seconds},
                           {"write", seconds_since(t_write)},
                           {"total", seconds_since(t0)}};
  finish_manifest(args.out_dir, manifest, outputs);

  print_grid(log, *grid);
  log << "simulations: " << result.stats.simulations << " (" << result.stats.simulation_failures
      << " failed)\n";
  const auto bad = verify_outputs(args.out_dir);
  if (!bad.empty()) throw std::runtime_error("output self-test failed for " + bad.front());
}

void report(const ReportArgs& args, std::ostream& log) {
  const auto manifest_text = read_file(args.run_dir / "manifest.json");
  const auto run_manifest = json::parse(manifest_text);
  const auto level = run_manifest.value("level", std::string());
  if (level != "system" && level != "bus") {
    throw UsageError(args.run_dir.string() + " does not hold a run system/bus result");
  }
  if (const auto bad = verify_outputs(args.run_dir); !bad.empty()) {
    throw std::runtime_error("run output " + bad.front() + " does not match its manifest");
  }
  const fs::path out_dir = args.out_dir.empty() ? args.run_dir / "report" : args.out_dir;
  prepare_dir(out_dir);
  auto manifest = base_manifest("report");
  manifest["source"] = {{"dir", args.run_dir.string()}, {"manifest_fnv1a", grid::content_hash(manifest_text)}};

  // Heat-map friendly grid: value[span][channel][measure].
  const auto grid_text = read_file(args.run_dir / (level + "_grid.csv"));
  std::istringstream grid_in(grid_text);
  std::string line;
  std::getline(grid_in, line);
  std::vector<std::string> spans, channels, measures;
  auto index_of = [](std::vector<std::string>& v, const std::string& s) {
    auto it = std::find(v.begin(), v.end(), s);
    if (it != v.end()) return static_cast<std::size_t>(it - v.begin());
    v.push_back(s);
    return v.size() - 1;
  };
  std::map<std::array<std::size_t, 3>, std::array<std::string, 4>> cells;
  std::size_t significant = 0, strong = 0;
  while (std::getline(grid_in, line)) {
    const auto f = split_csv(line);
    if (f.size() != 7) throw std::runtime_error("malformed grid row: " + line);
    cells[{index_of(spans, f[0]), index_of(channels, f[1]), index_of(measures, f[2])}] = {f[3], f[4], f[5], f[6]};
    if (f[6].find("significant") != std::string::npos) ++significant;
    if (f[6].rfind("strong", 0) == 0) ++strong;
  }
  auto number = [](const std::string& s) { return s.empty() ? json(nullptr) : json(std::stod(s)); };
  json r = json::array(), p = json::array(), flags = json::array(), n = json::array();
  for (std::size_t i = 0; i < spans.size(); ++i) {
    json rs = json::array(), ps = json::array(), fs_ = json::array(), ns = json::array();
    for (std::size_t j = 0; j < channels.size(); ++j) {
      json rc = json::array(), pc = json::array(), fc = json::array(), nc = json::array();
      for (std::size_t k = 0; k < measures.size(); ++k) {
        const auto& cell = cells.at({i, j, k});
        rc.push_back(number(cell[0]));
        pc.push_back(number(cell[1]));
        nc.push_back(std::stoul(cell[2]));
        fc.push_back(cell[3]);
      }
      rs.push_back(rc);
      ps.push_back(pc);
      fs_.push_back(fc);
      ns.push_back(nc);
    }
    r.push_back(rs);
    p.push_back(ps);
    flags.push_back(fs_);
    n.push_back(ns);
  }
  json rep = {{"level", level},       {"spans", spans}, {"channels", channels}, {"measures", measures},
              {"p", p},               {"n", n},         {"flag", flags},        {"cells", cells.size()},
              {"significant", significant}};
  if (level == "system") {
    rep["r"] = r;
    rep["strong"] = strong;
  }
  json outputs = json::array();
  outputs.push_back(write_output(out_dir, "report.json", rep.dump(1) + "\n"));

  if (level == "system") {
    // Error distribution per cell and accuracy level.
    struct Acc {
      std::size_t n = 0;
      double sum = 0.0, sq = 0.0, lo = INFINITY, hi = -INFINITY;
    };
    std::map<std::tuple<std::size_t, std::size_t, std::size_t, double>, Acc> dist;
    std::istringstream rec_in(read_file(args.run_dir / "records.csv"));
    std::getline(rec_in, line);
    while (std::getline(rec_in, line)) {
      const auto f = split_csv(line);
      if (f.size() != 12) throw std::runtime_error("malformed records row: " + line);
      if (f[11] != "ok") continue;
      const double e = std::stod(f[10]);
      auto& a = dist[{index_of(spans, f[7]), index_of(channels, f[8]), index_of(measures, f[9]), std::stod(f[5])}];
      ++a.n;
      a.sum += e;
      a.sq += e * e;
      a.lo = std::min(a.lo, e);
      a.hi = std::max(a.hi, e);
    }
    std::ostringstream os;
    os << "span,channel,measure,accuracy,n,mean,sd,min,max\n";
    for (const auto& [key, a] : dist) {
      const auto& [i, j, k, acc] = key;
      const double mean = a.sum / static_cast<double>(a.n);
      const double var = a.n > 1 ? std::max(0.0, (a.sq - a.sum * mean) / static_cast<double>(a.n - 1)) : NAN;
      os << spans[i] << ',' << channels[j] << ',' << measures[k] << ',' << format_double(acc) << ',' << a.n << ','
         << format_double(mean) << ',' << fmt(std::sqrt(var)) << ',' << format_double(a.lo) << ','
         << format_double(a.hi) << '\n';
    }
    outputs.push_back(write_output(out_dir, "distributions.csv", os.str()));
  }
  finish_manifest(out_dir, manifest, outputs);
  log << level << " level: significant " << significant << '/' << cells.size();
  if (level == "system") log << ", strong " << strong << '/' << cells.size();
  log << "\nwrote " << (out_dir / "report.json").string() << '\n';
}

}  // namespace loadcorr::cli
