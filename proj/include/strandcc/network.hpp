#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace strandcc {

/// Vacuum permeability used by the slot-leakage model, H/m.
inline constexpr double kMu0 = 4.0e-7 * 3.14159265358979323846;

/// One conductor position inside a slot. y is measured from the slot bottom;
/// polarity is +1 for go and -1 for return conductors.
struct Placement {
  double x = 0.0;
  double y = 0.0;
  int polarity = 1;
};

using StrandPath = std::vector<Placement>;

struct Strand {
  std::string label;
  double r_dc = 0.0;  // ohms
  std::optional<StrandPath> path;
};

/// Rectangular slot with infinitely permeable walls. Entry i of
/// placements_per_strand is the series path of strand i.
struct SlotLayout {
  double slot_width = 0.0;
  double slot_depth = 0.0;
  double stack_length = 0.0;
  std::vector<StrandPath> placements_per_strand;
  /// Uniform additive term applied to every L_ij (end-winding / air-gap).
  double end_winding_inductance = 0.0;

  std::size_t strand_count() const noexcept { return placements_per_strand.size(); }
};

/// n parallel strands between common terminals with their mutual-inductance
/// matrix (henries).
struct BundleNetwork {
  std::vector<Strand> strands;
  Eigen::MatrixXd inductance;

  std::size_t size() const noexcept { return strands.size(); }
  Eigen::VectorXd resistances() const;
};

/// Builds a network from resistances and a row-major n*n inductance array.
/// Labels default to "strand_01", "strand_02", ...
BundleNetwork make_network(const std::vector<double>& resistances,
                           const std::vector<double>& inductance_row_major,
                           std::vector<std::string> labels = {});

BundleNetwork make_network(const std::vector<double>& resistances,
                           const Eigen::MatrixXd& inductance,
                           std::vector<std::string> labels = {});

struct ValidationReport {
  std::size_t strand_count = 0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool positive_semidefinite = true;
  std::vector<std::string> warnings;
};

/// Throws DimensionMismatch, TooFewStrands, AsymmetricInductance,
/// NonPositiveSelfInductance or NonPositiveResistance. An indefinite matrix
/// is reported as a warning only.
ValidationReport validate_network(const BundleNetwork& net);

/// Checks the structural part of validate_network (dimensions, symmetry,
/// resistances) without requiring positive self-inductances.
void validate_structure(const BundleNetwork& net);

/// Throws InvalidLayout or PlacementOutOfSlot.
void validate_layout(const SlotLayout& layout);

/// 1-D slot-leakage inductance matrix. Flux crosses the slot horizontally,
/// so a placement pair (p, q) links mu0 * l / w * (depth - max(y_p, y_q)),
/// signed by both polarities; strand entries sum over their paths.
Eigen::MatrixXd slot_inductance_matrix(const SlotLayout& layout);

/// Network whose strands carry the layout paths; every strand gets r_dc.
BundleNetwork network_from_layout(const SlotLayout& layout,
                                  const std::vector<double>& resistances,
                                  std::vector<std::string> labels = {});

/// A permutation maps strand i to the canonical position set perm[i]
/// (0-based).
struct TranspositionSegment {
  double fraction = 0.0;
  std::vector<int> permutation;
};

struct TranspositionSchedule {
  std::vector<TranspositionSegment> segments;

  static TranspositionSchedule identity(std::size_t n);
  /// n equal segments; in segment k strand i sits at position (i + k) mod n.
  static TranspositionSchedule full_cyclic(std::size_t n);
};

/// Throws InvalidPermutation or FractionsNotNormalized.
void validate_schedule(const TranspositionSchedule& schedule, std::size_t n);

/// Length-weighted series combination of the permuted layouts. Resistances
/// are kept; the layout must describe one canonical position set per strand.
BundleNetwork apply_transposition(const BundleNetwork& net, const SlotLayout& layout,
                                  const TranspositionSchedule& schedule);

}  // namespace strandcc
