#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsplit/errors.hpp"

namespace dsplit::cli {

/// Invalid configuration; the message names the offending field or line.
class ConfigError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Settings shared by every command. The JSON config file uses the same
/// field names; command-line flags override file values.
struct ExperimentConfig {
  std::string problem;
  std::vector<std::string> methods;
  std::vector<double> hs;
  std::optional<double> tol;
  double t0 = 0.0;
  std::optional<double> tf;
  std::optional<std::size_t> N;
  std::optional<double> e;
  std::optional<std::uint64_t> budget;
  std::string output;  ///< empty writes to stdout
  std::optional<int> sample_stride;
};

ExperimentConfig parse_config_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks method files and the output directory exist.
void check_references(const ExperimentConfig& config);

void cmd_list_methods(std::ostream& out);
void cmd_converge(const ExperimentConfig& config, std::ostream& out);
void cmd_wave(const ExperimentConfig& config, std::ostream& out, std::ostream& log);
void cmd_kepler(const ExperimentConfig& config, std::ostream& out, std::ostream& log);
void cmd_integrate(const ExperimentConfig& config, std::ostream& out);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dsplit::cli
