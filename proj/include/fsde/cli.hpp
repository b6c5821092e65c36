#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsde/solver.hpp"

namespace fsde::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kConfigError = 2,
  kBlowUp = 3,
  kStatisticalFailure = 4,
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"ml-eval",    "solve",    "picard",
                                                 "separation", "lyapunov", "convergence"};
  return names;
}

/// Validated experiment description. `resolved` is the input document with
/// defaults filled in, the seed override applied and "auto" gamma replaced
/// by its value; it is what every artifact embeds.
struct ExperimentConfig {
  std::string subcommand;
  nlohmann::json resolved;

  nlohmann::json model;  ///< {"model": family, parameters...}
  double horizon = 1.0;
  std::size_t n_steps = 256;
  std::size_t n_paths = 1000;
  std::uint64_t seed = 0;
  std::vector<double> eta;
  std::vector<double> zeta;
  double ic_stddev = 0.0;
  SchemeOptions scheme;

  double gamma = 0.0;
  double epsilon = 0.05;
  double tail_fraction = 0.5;
  double tolerance = 0.05;
  double slope_margin = 0.05;
  double picard_tol = 1e-10;
  std::size_t max_iter = 50;
  std::size_t export_paths = 16;

  double ml_alpha = 0.75;
  double ml_gamma = 1.0;
  std::vector<double> ml_t_nodes;

  std::vector<std::size_t> levels;
  double max_ratio = 0.75;

  std::filesystem::path output_dir = "fsde_out";
};

/// Parses and validates everything a subcommand needs before any compute.
/// Throws ConfigError (or DomainError from the model constructors).
ExperimentConfig parse_config(const std::string& subcommand, const nlohmann::json& doc,
                              std::optional<std::uint64_t> seed_override = std::nullopt,
                              std::optional<std::filesystem::path> output_override = std::nullopt);

/// Runs one experiment and writes its artifacts into config.output_dir.
/// Returns kSuccess or kStatisticalFailure; other failures throw.
int run(const ExperimentConfig& config, std::ostream& log, int verbosity = 0);

/// Full command line: `fsde <subcommand> --config <path> [--seed N] [--out DIR] [-v]`.
/// Maps exceptions to exit codes.
int main(int argc, char** argv);

}  // namespace fsde::cli
