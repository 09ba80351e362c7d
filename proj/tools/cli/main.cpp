#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "loadcorr/gridsim/case.hpp"

namespace cli = loadcorr::cli;

int main(int argc, char** argv) {
  CLI::App app{"Load-model accuracy vs. response-error correlation experiments"};
  app.set_version_flag("--version", cli::tool_version());
  app.require_subcommand(1);

  std::string out_dir;

  auto* demo = app.add_subcommand("demo-similarity", "Compare the five similarity measures on perturbed sines");
  demo->add_option("--out", out_dir, "Output directory")->required();

  cli::SimulateArgs sim;
  std::string sim_case;
  auto* simulate = app.add_subcommand("simulate", "Run one time-domain simulation and write its channels");
  simulate->add_option("--case", sim_case, "Case JSON file")->required();
  simulate->add_option("--out", out_dir, "Output directory")->required();
  simulate->add_option("--fault-bus", sim.fault_bus, "Apply a bolted fault at this bus");
  simulate->add_option("--trip-machine", sim.trip_machine, "Trip this machine (index into the case's machines)");
  simulate->add_option("--t-apply", sim.t_apply, "Fault or trip time, s")->capture_default_str();
  simulate->add_option("--t-clear", sim.t_clear, "Fault clearing time, s")->capture_default_str();
  simulate->add_option("--fault-admittance", sim.fault_admittance, "Fault shunt admittance, pu")->capture_default_str();
  simulate->add_option("--span", sim.span, "Simulated time, s")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--dt", sim.dt, "Step size, s")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Seed recorded in the manifest")->capture_default_str();
  simulate->add_option("--branch", sim.branches, "Branch whose P/Q to record (repeatable; default all)");

  std::vector<std::string> case_names;
  auto* gen = app.add_subcommand("gen-case", "Write a bundled case as JSON");
  gen->add_option("names", case_names, "ninebus and/or rts73")->required()->check(CLI::IsMember({"ninebus", "rts73"}));
  gen->add_option("--out", out_dir, "Output directory")->required();

  cli::RunArgs run;
  std::string run_config, run_case;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment sweep");
  run_cmd->require_subcommand(1);
  for (const char* level : {"system", "bus"}) {
    auto* sub = run_cmd->add_subcommand(level, std::string(level) + "-level experiment");
    sub->add_option("--config", run_config, "Experiment config JSON")->required();
    sub->add_option("--case", run_case, "Case JSON file")->required();
    sub->add_option("--out", out_dir, "Output directory")->required();
    sub->add_option("--seed", run.seed, "Override the config's master_seed");
    sub->add_option("--jobs", run.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_flag("--oracle", run.oracle, "Replace simulation by the mismatched-load-count metric");
    sub->add_flag("--quiet", run.quiet, "No progress output");
  }

  cli::ReportArgs rep;
  std::string run_dir;
  auto* report = app.add_subcommand("report", "Turn a run directory into plot-ready JSON/CSV");
  report->add_option("--run", run_dir, "Directory written by `run system` or `run bus`")->required();
  report->add_option("--out", out_dir, "Output directory (default RUN/report)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*demo) {
      cli::demo_similarity(out_dir, std::cout);
    } else if (*simulate) {
      sim.case_path = sim_case;
      sim.out_dir = out_dir;
      cli::simulate(sim, std::cout);
    } else if (*gen) {
      cli::gen_case(case_names, out_dir, std::cout);
    } else if (*run_cmd) {
      run.level = run_cmd->got_subcommand("bus") ? loadcorr::exp::Level::Bus : loadcorr::exp::Level::System;
      run.config_path = run_config;
      run.case_path = run_case;
      run.out_dir = out_dir;
      cli::run(run, std::cout);
    } else if (*report) {
      rep.run_dir = run_dir;
      rep.out_dir = out_dir;
      cli::report(rep, std::cout);
    }
  } catch (const loadcorr::exp::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const loadcorr::grid::GridError& e) {
    std::cerr << "error: " << loadcorr::grid::to_string(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
