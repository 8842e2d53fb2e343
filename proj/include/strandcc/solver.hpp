#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "strandcc/network.hpp"
#include "strandcc/waveform.hpp"

namespace strandcc {

/// Steady-state solution of the current-driven bundle at one frequency.
/// Phasors are peak values in the cosine convention of Waveform.
struct HarmonicSolution {
  int order = 0;  // 0 for the DC term
  double angular_frequency = 0.0;
  std::complex<double> total_phasor;
  Eigen::VectorXcd strand_phasors;
  std::complex<double> terminal_voltage;
};

struct SolvedBundle {
  BundleNetwork network;
  Waveform drive;
  std::vector<Waveform> per_strand;
  std::vector<HarmonicSolution> per_harmonic;
  /// Hash of the solution content; reports derived from the same solve carry
  /// the same value.
  std::uint64_t fingerprint = 0;

  std::size_t strand_count() const noexcept { return per_strand.size(); }
};

/// Relative pivot threshold for the bordered impedance system.
inline constexpr double kSingularPivotThreshold = 1e-14;

/// Solves (R_i + jwL_ii) I_i + jw sum_{j!=i} L_ij I_j = V for every strand
/// together with sum_i I_i = total. omega = 0 uses the conductance divider.
/// Throws NetworkInvalid, NegativeFrequency or SingularSystem.
HarmonicSolution solve_harmonic(const BundleNetwork& net, double omega,
                                std::complex<double> total_phasor);

/// Superposes one solve per drive component (DC and each harmonic).
/// SingularSystem errors carry the offending harmonic order.
SolvedBundle solve_drive(const BundleNetwork& net, const Waveform& drive);

/// Largest strand KVL residual |Z_i I - V| of a harmonic solution, volts.
double kvl_residual(const BundleNetwork& net, const HarmonicSolution& sol);

/// alpha_i(t_k) = I_i(t_k) / I(t_k) on a uniform grid over one period;
/// points with |I(t_k)| <= zero_threshold * I_RMS are masked.
struct SharingFunctions {
  std::vector<double> times;
  Eigen::MatrixXd alpha;    // strands x grid points; NaN where masked
  std::vector<bool> masked;
  std::uint64_t fingerprint = 0;

  std::size_t strand_count() const noexcept { return static_cast<std::size_t>(alpha.rows()); }
  std::size_t unmasked_count() const;
};

inline constexpr double kDefaultZeroThreshold = 1e-6;

/// Throws GridTooSmall (grid_size < 64) or AllPointsMasked.
SharingFunctions sharing_functions(const SolvedBundle& sol, int grid_size,
                                   double zero_threshold = kDefaultZeroThreshold);

/// One settled period of time-domain strand currents.
struct TransientSamples {
  std::vector<double> times;  // k * h, k = 0..steps_per_period-1
  std::vector<double> total;
  Eigen::MatrixXd currents;   // strands x samples
  bool resistive_fallback = false;
};

/// Independent time-domain check of solve_drive. The last strand current is
/// eliminated through the current constraint, the remaining n-1 currents obey
/// M x' + G x = b(t) from pairwise KVL differences, and the system is
/// integrated with the trapezoidal rule from rest. The last of the
/// settle_periods integrated periods is returned. Networks without any
/// inductance fall back to the pointwise conductance divider.
/// Throws StepTooCoarse (< 512 steps), SettleTooShort (< 5 periods) or
/// ReducedMatrixSingular.
TransientSamples transient_oracle(const BundleNetwork& net, const Waveform& drive,
                                  int steps_per_period, int settle_periods);

}  // namespace strandcc
