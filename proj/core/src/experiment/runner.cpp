#include "loadcorr/experiment/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace loadcorr::exp {

namespace {

constexpr std::uint64_t kBenchmarkStream = 0;
constexpr std::uint64_t kClmStream = 1;
constexpr std::uint64_t kFaultStream = 2;
constexpr std::uint64_t kSwapStream = 3;

bool contains(const std::vector<ChannelKind>& v, ChannelKind c) {
  return std::find(v.begin(), v.end(), c) != v.end();
}

BusId disturbed_bus(const NetworkCase& c, const grid::Disturbance& d) {
  if (const auto* f = std::get_if<grid::BusFault>(&d)) return f->bus;
  if (const auto* g = std::get_if<grid::GeneratorOutage>(&d)) return c.machines.at(g->machine).bus;
  return 0;
}

/// What one run has to compute.
struct Scope {
  bool system = false;
  bool bus = false;
  std::vector<ChannelKind> system_channels;
  std::vector<ChannelKind> bus_channels;
  std::vector<ChannelKind> channels;  // union, in kAllChannels order
};

Scope make_scope(const ExperimentConfig& cfg, Which which) {
  Scope s;
  s.system = which != Which::Bus;
  s.bus = which != Which::System;
  for (ChannelKind ch : kAllChannels) {
    if (!contains(cfg.channels, ch)) continue;
    if (s.system) s.system_channels.push_back(ch);
    if (s.bus && is_bus_channel(ch)) s.bus_channels.push_back(ch);
    if (contains(s.system_channels, ch) || contains(s.bus_channels, ch)) s.channels.push_back(ch);
  }
  return s;
}

struct LevelOutput {
  SystemSample sample;
  std::vector<ResponseErrorRecord> records;
};

struct JobOutput {
  std::vector<LevelOutput> levels;
  std::size_t simulations = 0;
  std::size_t failures = 0;
};

class Job {
 public:
  Job(const ExperimentConfig& cfg, const Scope& scope, const ExperimentPlan& plan, const NetworkCase& base,
      const RunOptions& opts, int b, int f)
      : cfg_(cfg), scope_(scope), plan_(plan), base_(base), opts_(opts), b_(b), f_(f) {}

  JobOutput run() {
    JobOutput out;
    const auto& d = plan_.disturbances[b_][f_];
    const auto n_levels = cfg_.accuracy_levels.size();
    out.levels.resize(n_levels);
    for (std::size_t l = 0; l < n_levels; ++l) {
      const auto& pair = plan_.pairs[b_][l];
      auto& s = out.levels[l].sample;
      s.benchmark = b_;
      s.level = static_cast<int>(l);
      s.fault = f_;
      s.pair_seed = pair.seed;
      s.fault_bus = disturbed_bus(base_, d);
      s.accuracy = pair.accuracy;
      s.swapped = pair.swapped_buses.size();
    }
    if (opts_.oracle) {
      for (std::size_t l = 0; l < n_levels; ++l) oracle(plan_.pairs[b_][l], out.levels[l]);
      return out;
    }

    grid::SimulationOptions sim;
    sim.span = cfg_.spans.back();
    sim.dt = cfg_.dt;
    sim.branches = cfg_.branches;
    sim.seed = plan_.pair_seeds[b_];

    std::optional<grid::ResponseSet> bench;
    std::string bench_error;
    ++out.simulations;
    try {
      bench = simulate(plan_.benchmarks[b_], d, sim);
    } catch (const std::exception& e) {
      bench_error = std::string("benchmark: ") + e.what();
      ++out.failures;
    }
    for (std::size_t l = 0; l < n_levels; ++l) {
      const auto& pair = plan_.pairs[b_][l];
      auto& lo = out.levels[l];
      if (!bench) {
        lo.sample.sim_failure = bench_error;
        continue;
      }
      const bool identical = pair.swapped_buses.empty();
      try {
        if (identical) {
          compare(*bench, *bench, pair, lo);
        } else {
          ++out.simulations;
          const auto test = simulate(pair.test, d, sim);
          compare(*bench, test, pair, lo);
        }
      } catch (const std::exception& e) {
        lo.sample.sim_failure = std::string(identical ? "benchmark: " : "test: ") + e.what();
        lo.sample.errors.clear();
        lo.sample.measure_failures.clear();
        lo.records.clear();
        if (!identical) ++out.failures;
      }
    }
    return out;
  }

 private:
  grid::ResponseSet simulate(const NetworkCase& c, const grid::Disturbance& d,
                             const grid::SimulationOptions& sim) const {
    return opts_.provider ? opts_.provider(c, d, sim) : grid::run_simulation(c, d, sim);
  }

  ResponseErrorRecord record_template(const BenchmarkPair& pair) const {
    ResponseErrorRecord r;
    r.pair_seed = pair.seed;
    r.fault_bus = disturbed_bus(base_, plan_.disturbances[b_][f_]);
    r.benchmark = b_;
    r.fault = f_;
    r.accuracy = pair.accuracy;
    return r;
  }

  void oracle(const BenchmarkPair& pair, LevelOutput& lo) const {
    for (double span : cfg_.spans) {
      for (ChannelKind ch : scope_.system_channels) {
        for (Measure m : cfg_.measures) {
          lo.sample.errors[{span, ch, m}] = static_cast<double>(pair.swapped_buses.size());
        }
      }
      for (ChannelKind ch : scope_.bus_channels) {
        for (Measure m : cfg_.measures) {
          for (BusId bus : base_.load_buses()) {
            auto r = record_template(pair);
            r.level = lo.sample.level;
            r.source = std::to_string(bus);
            r.channel = ch;
            r.span = span;
            r.measure = m;
            r.model_accurate = !pair.swapped_buses.count(bus);
            r.error = r.model_accurate ? 0.0 : 1.0;
            lo.records.push_back(std::move(r));
          }
        }
      }
    }
  }

  void compare(const grid::ResponseSet& bench, const grid::ResponseSet& test, const BenchmarkPair& pair,
               LevelOutput& lo) const {
    const similarity::DtwConfig dtw{cfg_.dtw_window};
    for (ChannelKind ch : scope_.channels) {
      if (bench.sources(ch) != test.sources(ch)) {
        throw grid::GridError(grid::GridErrc::UnknownSource, "benchmark and test report different sources");
      }
    }
    for (double span : cfg_.spans) {
      const std::size_t n = samples_for_span(span, bench.dt);
      for (ChannelKind ch : scope_.channels) {
        const bool sys = contains(scope_.system_channels, ch);
        const bool bus = contains(scope_.bus_channels, ch);
        const auto& a = bench.of(ch);
        const auto& b = test.of(ch);
        for (Measure m : cfg_.measures) {
          const CellKey key{span, ch, m};
          double sum = 0.0;
          std::string failure;
          for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].size() < n || b[i].size() < n) {
              throw TimeSeriesError(TimeSeriesErrc::SpanExceedsData, "response shorter than the span");
            }
            double e = 0.0;
            try {
              e = response_error(a[i].values().first(n), b[i].values().first(n), m, dtw);
            } catch (const similarity::SimilarityError& err) {
              if (failure.empty()) {
                failure = std::string(similarity::to_string(err.code())) + " at " + a[i].source();
              }
              continue;
            }
            sum += e;
            if (bus) {
              auto r = record_template(pair);
              r.level = lo.sample.level;
              r.source = a[i].source();
              r.channel = ch;
              r.span = span;
              r.measure = m;
              r.error = e;
              r.model_accurate = !pair.swapped_buses.count(std::stoi(a[i].source()));
              lo.records.push_back(std::move(r));
            }
          }
          if (!sys) continue;
          if (failure.empty()) {
            lo.sample.errors[key] = sum;
          } else {
            lo.sample.measure_failures[key] = failure;
          }
        }
      }
    }
  }

  const ExperimentConfig& cfg_;
  const Scope& scope_;
  const ExperimentPlan& plan_;
  const NetworkCase& base_;
  const RunOptions& opts_;
  int b_;
  int f_;
};

std::vector<grid::Disturbance> draw_disturbances(const ExperimentConfig& cfg, const NetworkCase& base,
                                                 Rng& rng) {
  std::vector<grid::Disturbance> out;
  if (cfg.disturbance == DisturbanceKind::BusFault) {
    std::vector<BusId> candidates;
    for (const auto& bus : base.buses) {
      if (bus.kind != grid::BusKind::Slack) candidates.push_back(bus.id);
    }
    for (int i = 0; i < cfg.n_fault_locations; ++i) {
      const auto j = static_cast<std::size_t>(i) + rng.below(candidates.size() - static_cast<std::size_t>(i));
      std::swap(candidates[static_cast<std::size_t>(i)], candidates[j]);
      out.push_back(grid::BusFault{candidates[static_cast<std::size_t>(i)], cfg.t_apply, cfg.t_clear,
                                   cfg.fault_admittance});
    }
  } else {
    std::vector<std::size_t> candidates(base.machines.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i] = i;
    for (int i = 0; i < cfg.n_fault_locations; ++i) {
      const auto j = static_cast<std::size_t>(i) + rng.below(candidates.size() - static_cast<std::size_t>(i));
      std::swap(candidates[static_cast<std::size_t>(i)], candidates[j]);
      out.push_back(grid::GeneratorOutage{candidates[static_cast<std::size_t>(i)], cfg.t_apply});
    }
  }
  return out;
}

void validate_for(const ExperimentConfig& cfg, const NetworkCase& base, Which which) {
  grid::validate(base);
  validate(cfg, which == Which::Bus ? Level::Bus : Level::System, &base);
}

}  // namespace

ExperimentPlan plan_experiment(const ExperimentConfig& cfg, const NetworkCase& base) {
  ExperimentPlan plan;
  for (int b = 0; b < cfg.n_benchmark_systems; ++b) {
    const auto seed = derive_seed(cfg.master_seed, kBenchmarkStream, static_cast<std::uint64_t>(b));
    Rng clm_rng(derive_seed(seed, kClmStream, 0));
    Rng fault_rng(derive_seed(seed, kFaultStream, 0));
    const auto pair_seed = derive_seed(seed, kSwapStream, 0);

    plan.benchmark_seeds.push_back(seed);
    plan.pair_seeds.push_back(pair_seed);
    plan.benchmarks.push_back(place_clms(base, cfg.clm_count, clm_rng));
    plan.disturbances.push_back(draw_disturbances(cfg, base, fault_rng));
    auto& row = plan.pairs.emplace_back();
    for (double a : cfg.accuracy_levels) {
      row.push_back(derive_test_system(plan.benchmarks.back(), a, pair_seed));
    }
  }
  return plan;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const NetworkCase& base, Which which,
                                const RunOptions& opts) {
  validate_for(cfg, base, which);
  const auto t0 = std::chrono::steady_clock::now();
  const auto plan = plan_experiment(cfg, base);
  const auto scope = make_scope(cfg, which);

  const auto n_b = static_cast<std::size_t>(cfg.n_benchmark_systems);
  const auto n_f = static_cast<std::size_t>(cfg.n_fault_locations);
  const auto n_l = cfg.accuracy_levels.size();
  const std::size_t total = n_b * n_f;
  std::vector<JobOutput> outputs(total);

  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex mu;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= total) return;
      try {
        Job job(cfg, scope, plan, base, opts, static_cast<int>(j / n_f), static_cast<int>(j % n_f));
        outputs[j] = job.run();
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first_error) first_error = std::current_exception();
        next.store(total);
        return;
      }
      std::lock_guard lock(mu);
      ++done;
      if (opts.progress) opts.progress(done, total);
    }
  };
  const auto n_threads = static_cast<std::size_t>(std::max(1, opts.jobs));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < std::min(n_threads, total); ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  ExperimentResult result;
  std::vector<SystemSample> samples;
  std::vector<ResponseErrorRecord> records;
  std::size_t failed = 0;
  for (std::size_t b = 0; b < n_b; ++b) {
    for (std::size_t l = 0; l < n_l; ++l) {
      for (std::size_t f = 0; f < n_f; ++f) {
        auto& lo = outputs[b * n_f + f].levels[l];
        if (!lo.sample.sim_failure.empty()) ++failed;
        if (scope.bus) {
          records.insert(records.end(), std::make_move_iterator(lo.records.begin()),
                         std::make_move_iterator(lo.records.end()));
        }
        samples.push_back(std::move(lo.sample));
      }
    }
  }
  for (const auto& o : outputs) {
    result.stats.simulations += o.simulations;
    result.stats.simulation_failures += o.failures;
  }

  if (scope.system) {
    SystemLevelResult sys;
    sys.grid = system_grid_from_samples(cfg, samples);
    sys.ranges = system_range_correlations(cfg, samples);
    sys.samples = std::move(samples);
    result.system = std::move(sys);
  }
  if (scope.bus) {
    auto bus_cfg = cfg;
    bus_cfg.channels = scope.bus_channels;
    BusLevelResult bus;
    bus.failed_samples = failed;
    bus.grid = bus_grid_from_records(bus_cfg, records, failed);
    if (cfg.stratified) {
      for (std::size_t l = 0; l < n_l; ++l) {
        bus.per_level.push_back(bus_grid_from_records(bus_cfg, records, failed, static_cast<int>(l)));
      }
    }
    bus.records = std::move(records);
    result.bus = std::move(bus);
  }
  result.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

SystemLevelResult run_system_level(const ExperimentConfig& cfg, const NetworkCase& base, const RunOptions& opts) {
  return std::move(*run_experiment(cfg, base, Which::System, opts).system);
}

BusLevelResult run_bus_level(const ExperimentConfig& cfg, const NetworkCase& base, const RunOptions& opts) {
  return std::move(*run_experiment(cfg, base, Which::Bus, opts).bus);
}

stats::CorrelationResult oracle_sanity(const ExperimentConfig& cfg, const NetworkCase& base) {
  validate_for(cfg, base, Which::System);
  const auto plan = plan_experiment(cfg, base);
  std::vector<double> accuracy, mismatches;
  for (std::size_t b = 0; b < plan.pairs.size(); ++b) {
    for (const auto& pair : plan.pairs[b]) {
      for (int f = 0; f < cfg.n_fault_locations; ++f) {
        accuracy.push_back(pair.accuracy);
        mismatches.push_back(static_cast<double>(pair.swapped_buses.size()));
      }
    }
  }
  return stats::pearson(accuracy, mismatches);
}

}  // namespace loadcorr::exp
