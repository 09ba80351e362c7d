#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "loadcorr/experiment/config.hpp"

namespace loadcorr::cli {

namespace fs = std::filesystem;

inline constexpr const char* kToolName = "loadcorr";
std::string tool_version();

/// Thrown for bad arguments detected after parsing; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulateArgs {
  fs::path case_path;
  fs::path out_dir;
  std::optional<int> fault_bus;
  std::optional<std::size_t> trip_machine;
  double t_apply = 0.1;
  double t_clear = 0.2;
  double fault_admittance = 1e4;
  double span = 10.0;
  double dt = 0.01;
  std::uint64_t seed = 0;
  std::vector<std::string> branches;
};

struct RunArgs {
  exp::Level level = exp::Level::System;
  fs::path config_path;
  fs::path case_path;
  fs::path out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  bool oracle = false;
  bool quiet = false;
};

struct ReportArgs {
  fs::path run_dir;
  fs::path out_dir;
};

// Each command writes its outputs plus one manifest.json into out_dir and
// prints a short summary to `log`. They throw on failure.
void demo_similarity(const fs::path& out_dir, std::ostream& log);
void simulate(const SimulateArgs& args, std::ostream& log);
void gen_case(const std::vector<std::string>& names, const fs::path& out_dir, std::ostream& log);
void run(const RunArgs& args, std::ostream& log);
void report(const ReportArgs& args, std::ostream& log);

/// Hash and row count of every data file named in the manifest, compared
/// with the files on disk. Returns the mismatching names.
std::vector<std::string> verify_outputs(const fs::path& dir);

/// Writes `text` to dir/name and returns its manifest entry.
nlohmann::json write_output(const fs::path& dir, const std::string& name, const std::string& text);

}  // namespace loadcorr::cli
