#include "strandcc/network.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "strandcc/error.hpp"

namespace strandcc {

namespace {

std::string default_label(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "strand_%02zu", i + 1);
  return buf;
}

std::string pair_name(Eigen::Index i, Eigen::Index j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

Eigen::VectorXd BundleNetwork::resistances() const {
  Eigen::VectorXd r(static_cast<Eigen::Index>(strands.size()));
  for (std::size_t i = 0; i < strands.size(); ++i) r(static_cast<Eigen::Index>(i)) = strands[i].r_dc;
  return r;
}

BundleNetwork make_network(const std::vector<double>& resistances,
                           const Eigen::MatrixXd& inductance,
                           std::vector<std::string> labels) {
  const auto n = resistances.size();
  if (!labels.empty() && labels.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "label count differs from strand count");
  }
  BundleNetwork net;
  net.strands.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    net.strands.push_back({labels.empty() ? default_label(i) : labels[i], resistances[i], std::nullopt});
  }
  net.inductance = inductance;
  return net;
}

BundleNetwork make_network(const std::vector<double>& resistances,
                           const std::vector<double>& inductance_row_major,
                           std::vector<std::string> labels) {
  const auto n = static_cast<Eigen::Index>(resistances.size());
  if (static_cast<Eigen::Index>(inductance_row_major.size()) != n * n) {
    throw Error(ErrorCode::DimensionMismatch,
                "inductance array has " + std::to_string(inductance_row_major.size()) +
                    " entries, expected " + std::to_string(n * n));
  }
  Eigen::MatrixXd l(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) l(i, j) = inductance_row_major[static_cast<std::size_t>(i * n + j)];
  return make_network(resistances, l, std::move(labels));
}

void validate_structure(const BundleNetwork& net) {
  const auto n = static_cast<Eigen::Index>(net.size());
  if (n < 2) {
    throw Error(ErrorCode::TooFewStrands,
                "a bundle needs at least 2 strands, got " + std::to_string(n));
  }
  if (net.inductance.rows() != n || net.inductance.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "inductance matrix is " + std::to_string(net.inductance.rows()) + "x" +
                    std::to_string(net.inductance.cols()) + " for " + std::to_string(n) +
                    " strands");
  }
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (!(net.strands[i].r_dc > 0.0) || !std::isfinite(net.strands[i].r_dc)) {
      throw Error(ErrorCode::NonPositiveResistance,
                  "strand " + net.strands[i].label + " has r_dc = " +
                      std::to_string(net.strands[i].r_dc));
    }
  }
  if (!net.inductance.allFinite()) {
    throw Error(ErrorCode::NetworkInvalid, "inductance matrix has non-finite entries");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double a = net.inductance(i, j);
      const double b = net.inductance(j, i);
      if (std::abs(a - b) > 1e-12 * std::max(std::abs(a), std::abs(b))) {
        throw Error(ErrorCode::AsymmetricInductance,
                    "L" + pair_name(i, j) + " != L" + pair_name(j, i));
      }
    }
  }
}

ValidationReport validate_network(const BundleNetwork& net) {
  validate_structure(net);
  const auto n = static_cast<Eigen::Index>(net.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(net.inductance(i, i) > 0.0)) {
      throw Error(ErrorCode::NonPositiveSelfInductance,
                  "L" + pair_name(i, i) + " = " + std::to_string(net.inductance(i, i)));
    }
  }

  ValidationReport report;
  report.strand_count = net.size();
  const Eigen::MatrixXd sym = 0.5 * (net.inductance + net.inductance.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = eig.eigenvalues().minCoeff();
  report.max_eigenvalue = eig.eigenvalues().maxCoeff();
  // Round-off on a semidefinite matrix can push the smallest eigenvalue
  // slightly below zero.
  const double floor = -1e-12 * std::max(std::abs(report.max_eigenvalue), 1e-300);
  report.positive_semidefinite = report.min_eigenvalue >= floor;
  if (!report.positive_semidefinite) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "inductance matrix is indefinite (smallest eigenvalue %.6g H)",
                  report.min_eigenvalue);
    report.warnings.emplace_back(buf);
  }
  return report;
}

void validate_layout(const SlotLayout& layout) {
  if (!(layout.slot_width > 0.0) || !(layout.slot_depth > 0.0) ||
      !(layout.stack_length > 0.0)) {
    throw Error(ErrorCode::InvalidLayout, "slot width, depth and stack length must be positive");
  }
  if (layout.placements_per_strand.empty()) {
    throw Error(ErrorCode::InvalidLayout, "layout has no strands");
  }
  for (std::size_t i = 0; i < layout.placements_per_strand.size(); ++i) {
    const auto& path = layout.placements_per_strand[i];
    if (path.empty()) {
      throw Error(ErrorCode::InvalidLayout, "strand " + std::to_string(i + 1) + " has an empty path");
    }
    for (const auto& p : path) {
      if (p.y < 0.0 || p.y > layout.slot_depth || p.x < 0.0 || p.x > layout.slot_width) {
        throw Error(ErrorCode::PlacementOutOfSlot,
                    "strand " + std::to_string(i + 1) + " placement (" + std::to_string(p.x) +
                        ", " + std::to_string(p.y) + ") lies outside the slot");
      }
      if (p.polarity != 1 && p.polarity != -1) {
        throw Error(ErrorCode::InvalidLayout,
                    "strand " + std::to_string(i + 1) + " has polarity " +
                        std::to_string(p.polarity));
      }
    }
  }
}

namespace {

double path_mutual(const SlotLayout& layout, const StrandPath& a, const StrandPath& b) {
  const double per_height = kMu0 * layout.stack_length / layout.slot_width;
  double sum = 0.0;
  for (const auto& p : a) {
    for (const auto& q : b) {
      sum += per_height * (layout.slot_depth - std::max(p.y, q.y)) * p.polarity * q.polarity;
    }
  }
  return sum;
}

}  // namespace

Eigen::MatrixXd slot_inductance_matrix(const SlotLayout& layout) {
  validate_layout(layout);
  const auto n = static_cast<Eigen::Index>(layout.strand_count());
  Eigen::MatrixXd l(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double m = path_mutual(layout, layout.placements_per_strand[static_cast<std::size_t>(i)],
                                   layout.placements_per_strand[static_cast<std::size_t>(j)]) +
                       layout.end_winding_inductance;
      l(i, j) = m;
      l(j, i) = m;
    }
  }
  return l;
}

BundleNetwork network_from_layout(const SlotLayout& layout,
                                  const std::vector<double>& resistances,
                                  std::vector<std::string> labels) {
  if (resistances.size() != layout.strand_count()) {
    throw Error(ErrorCode::DimensionMismatch,
                "layout has " + std::to_string(layout.strand_count()) + " strands but " +
                    std::to_string(resistances.size()) + " resistances were given");
  }
  BundleNetwork net = make_network(resistances, slot_inductance_matrix(layout), std::move(labels));
  for (std::size_t i = 0; i < net.size(); ++i) net.strands[i].path = layout.placements_per_strand[i];
  return net;
}

TranspositionSchedule TranspositionSchedule::identity(std::size_t n) {
  TranspositionSegment seg{1.0, std::vector<int>(n)};
  for (std::size_t i = 0; i < n; ++i) seg.permutation[i] = static_cast<int>(i);
  return {{std::move(seg)}};
}

TranspositionSchedule TranspositionSchedule::full_cyclic(std::size_t n) {
  TranspositionSchedule s;
  for (std::size_t k = 0; k < n; ++k) {
    TranspositionSegment seg{1.0 / static_cast<double>(n), std::vector<int>(n)};
    for (std::size_t i = 0; i < n; ++i) seg.permutation[i] = static_cast<int>((i + k) % n);
    s.segments.push_back(std::move(seg));
  }
  return s;
}

void validate_schedule(const TranspositionSchedule& schedule, std::size_t n) {
  if (schedule.segments.empty()) {
    throw Error(ErrorCode::FractionsNotNormalized, "schedule has no segments");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
    const auto& seg = schedule.segments[k];
    if (!(seg.fraction > 0.0) || seg.fraction > 1.0) {
      throw Error(ErrorCode::FractionsNotNormalized,
                  "segment " + std::to_string(k + 1) + " fraction must lie in (0, 1]");
    }
    total += seg.fraction;
    if (seg.permutation.size() != n) {
      throw Error(ErrorCode::InvalidPermutation,
                  "segment " + std::to_string(k + 1) + " permutation has " +
                      std::to_string(seg.permutation.size()) + " entries, expected " +
                      std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (int p : seg.permutation) {
      if (p < 0 || static_cast<std::size_t>(p) >= n || seen[static_cast<std::size_t>(p)]) {
        throw Error(ErrorCode::InvalidPermutation,
                    "segment " + std::to_string(k + 1) + " is not a bijection");
      }
      seen[static_cast<std::size_t>(p)] = true;
    }
  }
  if (std::abs(total - 1.0) > 1e-12) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "fractions sum to %.15g, expected 1", total);
    throw Error(ErrorCode::FractionsNotNormalized, buf);
  }
}

BundleNetwork apply_transposition(const BundleNetwork& net, const SlotLayout& layout,
                                  const TranspositionSchedule& schedule) {
  const std::size_t n = net.size();
  if (layout.strand_count() != n) {
    throw Error(ErrorCode::DimensionMismatch, "layout and network strand counts differ");
  }
  validate_schedule(schedule, n);
  const Eigen::MatrixXd canonical = slot_inductance_matrix(layout);

  // L(perm)_ij = canonical(perm[i], perm[j]); segments add in series.
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd effective = Eigen::MatrixXd::Zero(nn, nn);
  for (const auto& seg : schedule.segments) {
    for (Eigen::Index i = 0; i < nn; ++i) {
      const int pi = seg.permutation[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < nn; ++j) {
        effective(i, j) += seg.fraction * canonical(pi, seg.permutation[static_cast<std::size_t>(j)]);
      }
    }
  }
  BundleNetwork out = net;
  out.inductance = 0.5 * (effective + effective.transpose());
  return out;
}

}  // namespace strandcc
