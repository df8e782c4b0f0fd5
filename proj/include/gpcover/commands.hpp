#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gpcover/error.hpp"
#include "gpcover/gp.hpp"
#include "gpcover/point.hpp"

namespace gpcover {

struct RunConfig {
  std::string subcommand;
  std::filesystem::path env_path;
  std::filesystem::path data_path;
  std::filesystem::path truth_path;  // simulate: field csv; sampled when empty
  std::optional<Hyperparameters> hyper;
  std::optional<double> delta;
  double alpha = 2.0;
  double eta = 1.0;
  int k = 1;
  std::optional<Point> depot;
  std::uint64_t seed = 0;
  double grid_res = 1.0;  // verification and evaluation grid spacing, meters
  std::filesystem::path out_dir = ".";
  bool hard_boundary = false;
  bool prune = false;
  bool svg = true;
  int trials = 10;
  std::vector<double> resolutions;  // lawn-mower sweep; empty means plan density and 4x
  int checkpoints = 20;

  /// Throws Error(invalid_argument) or Error(delta_out_of_range) on
  /// inconsistent settings for the given subcommand.
  void validate() const;
};

/// Process exit code for an error kind: 2 input, 3 degenerate data, 4 invariant breach.
int exit_code(ErrorKind kind);

// Each command writes its files into cfg.out_dir and throws Error on failure.
void cmd_fit(const RunConfig& cfg);
void cmd_plan(const RunConfig& cfg);
void cmd_tour(const RunConfig& cfg);
void cmd_split(const RunConfig& cfg);
void cmd_simulate(const RunConfig& cfg);
void cmd_compare(const RunConfig& cfg);

void run_command(const RunConfig& cfg);

/// Full command line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace gpcover
