#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "singlab/ifs.hpp"
#include "singlab/report.hpp"

namespace singlab {

struct RunConfig {
  std::string command;
  std::string ifs_source;  // "preset:<name>", "file:<path>" or "inline"
  std::optional<IfsSystem> ifs;
  Json params = Json::object();
  std::uint64_t seed = 1;
  long long budget_nodes = 10'000'000;
  long long budget_samples = 100'000'000;
  int threads = 1;
  bool deterministic = false;
  std::string out_path;  // empty: stdout
  std::string format;    // "csv" or "json"; empty picks the command default
};

const std::vector<std::string>& command_names();

// Parses and validates a JSON run document:
// {command, ifs | preset | ifs_file, seed, threads, deterministic,
//  budget: {nodes, samples}, output: {path, format}, params: {...}}.
RunConfig parse_config(const std::string& text);

// Runs the configured subcommand and writes its report. Returns 0, 1 or 2.
int run_and_emit(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full command line entry point.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Directory holding shipped data files (SINGLAB_DATA_DIR overrides).
std::string data_dir();

}  // namespace singlab
