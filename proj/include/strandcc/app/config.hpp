#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "strandcc/network.hpp"
#include "strandcc/waveform.hpp"

namespace strandcc::app {

struct AnalysisOptions {
  int grid_size = 1024;
  double abs_tol = 0.0;
  double rel_tol = 1e-6;
  double equality_tol = 1e-9;
  double zero_threshold = 1e-6;
  bool oracle = false;
  int oracle_steps_per_period = 2048;
  int oracle_settle_periods = 10;
  double oracle_tolerance = 1e-3;  // relative RMS per strand
};

struct InlineNetwork {
  std::vector<std::string> labels;
  std::vector<double> resistances;
  std::vector<double> inductance;  // row-major n*n, henries
};

struct LayoutNetwork {
  SlotLayout layout;
  std::vector<std::string> labels;
  std::vector<double> resistances;
};

struct NamedSchedule {
  std::string name;
  TranspositionSchedule schedule;
};

/// Parsed simulation input. Exactly one of `inline_network` / `layout` is set.
struct SimulationConfig {
  std::filesystem::path source;
  std::string name;
  std::optional<InlineNetwork> inline_network;
  std::optional<LayoutNetwork> layout;
  Waveform drive = Waveform::zero(1.0);
  AnalysisOptions analysis;
  std::optional<NamedSchedule> transposition;
  std::vector<NamedSchedule> schedules;
  std::vector<double> sweep_frequencies;
  std::filesystem::path out_dir = "out";
};

/// Reads a JSON config. A document with an "echo" member (a solve report) is
/// read through that member. Throws Error(ConfigParse) with file, line and
/// JSON-path context.
SimulationConfig load_config(const std::filesystem::path& path);

/// Parses an already-loaded document; `source` is used for messages and to
/// resolve relative file references.
SimulationConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& source);

/// Network described by the config, with the optional transposition applied.
/// Throws Error(NetworkInvalid) with file context.
BundleNetwork build_network(const SimulationConfig& config);

/// Network for a specific schedule; requires a layout source.
BundleNetwork build_network(const SimulationConfig& config, const TranspositionSchedule& schedule);

/// Reads an n x n matrix from CSV (comma separated, '#' comments).
std::vector<double> read_matrix_csv(const std::filesystem::path& path, std::size_t& n_out);

/// Config fragment that reproduces `net` and `config`'s drive/analysis.
nlohmann::json echo_config(const SimulationConfig& config, const BundleNetwork& net);

}  // namespace strandcc::app
