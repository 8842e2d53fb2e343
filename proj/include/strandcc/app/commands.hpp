#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "strandcc/app/config.hpp"

namespace strandcc::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitPropertyViolated = 2,
};

/// Writes report.json, currents.csv and sharing.csv into out_dir and a
/// verdict summary to `log`.
int run_solve(const SimulationConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

/// Writes sweep.csv: loss figures vs fundamental frequency.
int run_sweep(const SimulationConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

/// Writes transposition.csv: one row for the untransposed layout, then one
/// per configured schedule.
int run_transposition_compare(const SimulationConfig& config, const std::filesystem::path& out_dir,
                              std::ostream& log);

/// Validates the network; with a seed, also checks the loss property on
/// randomized drives through it.
int run_validate(const SimulationConfig& config, std::optional<unsigned> seed, std::ostream& log);

/// Command-line entry point (subcommands solve, sweep, transpose-compare,
/// validate).
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace strandcc::app
