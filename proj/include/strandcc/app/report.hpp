#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "strandcc/losses.hpp"
#include "strandcc/solver.hpp"

namespace strandcc::app {

/// Fixed 17-significant-digit formatting used in every CSV.
std::string format_number(double v);

/// Columns time_s, total_A, strand_01_A, ... on a uniform grid.
std::string currents_csv(const SolvedBundle& sol, int grid_size);

/// Columns time_s, total_A, masked, alpha_01, ...; masked rows leave the
/// alpha cells empty.
std::string sharing_csv(const SolvedBundle& sol, const SharingFunctions& shares);

struct OracleCheck {
  bool ran = false;
  std::string skipped_reason;
  bool resistive_fallback = false;
  double max_relative_rms_error = 0.0;
  std::size_t worst_strand = 0;
  double tolerance = 0.0;
  bool agrees() const { return !ran || max_relative_rms_error <= tolerance; }
};

/// Per-strand relative RMS difference between the transient samples and the
/// phasor reconstruction at the same instants.
OracleCheck compare_with_oracle(const SolvedBundle& sol, const TransientSamples& samples, double tolerance);

nlohmann::json loss_report_json(const LossReport& report, const SolvedBundle& sol);

std::string hex_fingerprint(std::uint64_t v);

}  // namespace strandcc::app
