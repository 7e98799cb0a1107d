#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "darkgate/config.hpp"
#include "darkgate/experiments.hpp"

namespace darkgate {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int invariant_failure = 1;
inline constexpr int config_error = 2;
inline constexpr int io_error = 3;
}  // namespace exit_code

class IoError : public Error {
 public:
  using Error::Error;
};

/// Parsed command line. Unset optionals fall back to the config file.
struct CliOptions {
  std::string command;
  std::string config;  // empty: paper_sec3_fig3 for fig3, paper_sec4 otherwise
  std::optional<std::string> out;
  std::optional<int> nmax;
  std::optional<double> dt;

  std::string state = "max";
  std::optional<double> t;
  std::string propagator = "full";
  std::optional<std::vector<double>> deltas;
  std::string panel = "a";
  std::optional<double> from, to, step;
};

/// Runs one subcommand and returns its exit code. Human-readable output goes to
/// `out`, diagnostics to `err`.
int run_command(const CliOptions& opts, std::ostream& out, std::ostream& err);

/// Configuration a command will run with, after command-line overrides.
RunConfig resolve_config(const CliOptions& opts);

/// 64-bit FNV-1a, lowercase hex.
std::string fnv1a_hex(std::string_view data);

/// CSV text for an experiment: manifest comment line, header, one row per axis point.
std::string to_csv(const ExperimentResult& r, const std::string& manifest_hash);

/// Writes `files` (name -> content) into `dir` via temporaries; on failure nothing is left behind.
void write_outputs(const std::string& dir, const std::vector<std::pair<std::string, std::string>>& files);

}  // namespace darkgate
