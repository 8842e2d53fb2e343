#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strandcc/solver.hpp"
#include "strandcc/waveform.hpp"

namespace strandcc {

struct LossOptions {
  double abs_tol = 0.0;        // amperes
  double rel_tol = 1e-6;       // of I_RMS / n
  double equality_tol = 1e-9;  // relative, for the equal-loss branch
};

/// Outcome of the pointwise comparison I_i(t) against I(t)/n.
struct DetectionVerdict {
  bool occurred = false;
  double threshold = 0.0;      // amperes
  double max_deviation = 0.0;  // max over grid of |I_i(t) - I(t)/n|
  std::size_t deviation_strand = 0;
  double deviation_time = 0.0;
  double max_phasor_deviation = 0.0;  // max |I_i,h - I_h/n| over components
  std::size_t phasor_deviation_strand = 0;
  int phasor_deviation_order = 0;
  std::size_t component_count = 0;  // DC term plus harmonics
  std::uint64_t fingerprint = 0;
};

enum class PropertyStatus { Holds, Violated, NotApplicable };

std::string_view to_string(PropertyStatus status) noexcept;

struct PropertyVerdict {
  PropertyStatus status = PropertyStatus::Holds;
  /// P_CC - P_CC=0, watts, from the deviation expansion.
  double margin_watts = 0.0;
  /// Smallest excess implied by the detected deviation; the strict branch
  /// requires margin_watts above it.
  double margin_floor = 0.0;
  std::string detail;
};

struct LossReport {
  std::uint64_t fingerprint = 0;
  std::vector<double> resistances;
  std::vector<double> per_strand_rms;
  std::vector<double> baseline_rms;
  std::vector<double> per_strand_cc_losses;
  std::vector<double> per_strand_baseline_losses;
  double drive_rms = 0.0;
  double total_cc_losses = 0.0;
  double total_baseline_losses = 0.0;
  /// P_CC - P_CC=0 computed from the deviations d_i = I_i - I/n as
  /// sum_i R_i (rms(d_i)^2 + 2 <d_i, I/n>); free of the cancellation in the
  /// direct difference.
  double excess_losses = 0.0;
  /// P_CC / P_CC=0; empty when the baseline is zero (no drive).
  std::optional<double> loss_ratio;
  /// Parallel combination 1 / sum(1/R_i).
  double bundle_dc_resistance = 0.0;
  DetectionVerdict detection;
  PropertyVerdict property;

  std::size_t strand_count() const noexcept { return resistances.size(); }
};

/// I(t)/n. Throws InvalidStrandCount for n < 2.
Waveform baseline_strand_current(const Waveform& drive, int n);

/// Detection grid size per period.
inline constexpr int kDetectionGrid = 1024;

/// Throws NegativeTolerance.
DetectionVerdict detect_circulating(const SolvedBundle& sol, double abs_tol, double rel_tol);

/// Loss bookkeeping for one solve, including detection and the property
/// verdict.
LossReport compute_losses(const SolvedBundle& sol, const LossOptions& options = {});

/// Checks "circulating currents <=> P_CC=0 < P_CC" on one solve. The
/// even-split baseline is the loss minimum only when all strands share one
/// resistance; other bundles get NotApplicable. Throws InconsistentInputs
/// when report and detection come from different solves.
PropertyVerdict check_fundamental_property(const LossReport& report,
                                           const DetectionVerdict& detection,
                                           double equality_tol = 1e-9);

struct WitnessPoint {
  std::size_t grid_index = 0;
  double sum_alpha = 0.0;
  double sum_alpha_sq = 0.0;
  bool sum_ok = true;      // |sum alpha - 1| <= 1e-9
  bool bound_ok = true;    // sum alpha^2 - 1/n >= -1e-12
};

struct CauchySchwarzWitness {
  std::vector<WitnessPoint> points;  // unmasked points only
  bool all_pass = true;
  double max_sum_error = 0.0;
  double min_gap = 0.0;  // min over points of sum alpha^2 - 1/n
  std::size_t max_imbalance_index = 0;  // grid index of the largest sum alpha^2
  double max_imbalance_time = 0.0;
  double max_sum_alpha_sq = 0.0;
};

CauchySchwarzWitness cauchy_schwarz_witness(const SharingFunctions& shares);

}  // namespace strandcc
