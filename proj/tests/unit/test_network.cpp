#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "generators.hpp"
#include "strandcc/network.hpp"
#include "strandcc/solver.hpp"

namespace strandcc {
namespace {

using testing::error_code_of;
using testing::Rng;

SlotLayout three_strand_layout() {
  SlotLayout lay;
  lay.slot_width = 0.01;
  lay.slot_depth = 0.03;
  lay.stack_length = 0.15;
  lay.placements_per_strand = {
      {{0.002, 0.005, 1}},
      {{0.005, 0.012, 1}, {0.005, 0.025, 1}},
      {{0.008, 0.020, -1}},
  };
  return lay;
}

TEST(Network, ValidatesWellFormedInput) {
  const auto net = make_network({1.0, 1.0, 1.0}, Eigen::MatrixXd::Identity(3, 3));
  const auto report = validate_network(net);
  EXPECT_EQ(report.strand_count, 3U);
  EXPECT_TRUE(report.positive_semidefinite);
  EXPECT_TRUE(report.warnings.empty());
  EXPECT_EQ(net.strands[1].label, "strand_02");
}

TEST(Network, ValidationErrors) {
  EXPECT_EQ(error_code_of([] { validate_network(make_network({1.0, 1.0}, std::vector<double>{1e-3, 2e-4, 3e-4, 1e-3})); }),
            ErrorCode::AsymmetricInductance);
  EXPECT_EQ(error_code_of([] { validate_network(make_network({1.0, 0.0}, std::vector<double>{1e-3, 0.0, 0.0, 1e-3})); }),
            ErrorCode::NonPositiveResistance);
  EXPECT_EQ(error_code_of([] { validate_network(make_network({1.0, 1.0}, std::vector<double>{1e-3, 0.0, 0.0, 0.0})); }),
            ErrorCode::NonPositiveSelfInductance);
  EXPECT_EQ(error_code_of([] { validate_network(make_network({1.0}, std::vector<double>{1e-3})); }), ErrorCode::TooFewStrands);
  EXPECT_EQ(error_code_of([] { make_network({1.0, 1.0}, std::vector<double>{1e-3, 0.0, 0.0}); }), ErrorCode::DimensionMismatch);
}

TEST(Network, IndefiniteMatrixIsAWarning) {
  // Coupling larger than the self terms: eigenvalues 1e-3 +/- 2e-3.
  const auto report = validate_network(make_network({1.0, 1.0}, std::vector<double>{1e-3, 2e-3, 2e-3, 1e-3}));
  EXPECT_FALSE(report.positive_semidefinite);
  EXPECT_NEAR(report.min_eigenvalue, -1e-3, 1e-15);
  ASSERT_EQ(report.warnings.size(), 1U);
}

TEST(SlotInductance, MatchesDirectEvaluation) {
  // Values from an independent evaluation of the placement-pair formula.
  Eigen::MatrixXd expected(3, 3);
  expected << 4.712388980384689e-07, 4.3353978619539136e-07, -1.8849555921538755e-07,  //
      4.3353978619539136e-07, 6.2203534541077882e-07, -2.8274333882308128e-07,         //
      -1.8849555921538755e-07, -2.8274333882308128e-07, 1.8849555921538755e-07;
  const Eigen::MatrixXd l = slot_inductance_matrix(three_strand_layout());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(l(i, j), expected(i, j), 1e-15 * std::abs(expected(i, j))) << i << j;
  EXPECT_EQ(l, l.transpose());
}

TEST(SlotInductance, EqualHeightsAreFullyCoupled) {
  SlotLayout lay{0.01, 0.03, 0.1, {{{0.002, 0.01, 1}}, {{0.008, 0.01, 1}}}, 0.0};
  const Eigen::MatrixXd l = slot_inductance_matrix(lay);
  EXPECT_DOUBLE_EQ(l(0, 0), l(1, 1));
  EXPECT_DOUBLE_EQ(l(0, 0), l(0, 1));
}

TEST(SlotInductance, TopOfSlotHasNoSelfTerm) {
  SlotLayout lay{0.01, 0.03, 0.1, {{{0.002, 0.03, 1}}, {{0.008, 0.01, 1}}}, 0.0};
  const Eigen::MatrixXd l = slot_inductance_matrix(lay);
  EXPECT_EQ(l(0, 0), 0.0);
  EXPECT_EQ(l(0, 1), 0.0);
  EXPECT_GT(l(1, 1), 0.0);

  lay.end_winding_inductance = 1e-6;
  EXPECT_DOUBLE_EQ(slot_inductance_matrix(lay)(0, 0), 1e-6);
}

TEST(SlotInductance, PlacementOutsideSlot) {
  SlotLayout lay{0.01, 0.03, 0.1, {{{0.002, 0.031, 1}}}, 0.0};
  EXPECT_EQ(error_code_of([&] { slot_inductance_matrix(lay); }), ErrorCode::PlacementOutOfSlot);
  lay.placements_per_strand = {{{0.02, 0.01, 1}}};
  EXPECT_EQ(error_code_of([&] { slot_inductance_matrix(lay); }), ErrorCode::PlacementOutOfSlot);
  lay.placements_per_strand = {{{0.002, -0.001, 1}}};
  EXPECT_EQ(error_code_of([&] { slot_inductance_matrix(lay); }), ErrorCode::PlacementOutOfSlot);
  lay.placements_per_strand = {{{0.002, 0.01, 2}}};
  EXPECT_EQ(error_code_of([&] { slot_inductance_matrix(lay); }), ErrorCode::InvalidLayout);
}

SlotLayout random_layout(Rng& rng, int n, int turns, bool positive_only) {
  SlotLayout lay{0.01, 0.04, 0.2, {}, 0.0};
  for (int i = 0; i < n; ++i) {
    StrandPath path;
    for (int t = 0; t < turns; ++t) {
      path.push_back({testing::uniform(rng, 0.0, 0.01), testing::uniform(rng, 0.0, 0.04),
                      positive_only || testing::uniform(rng, 0, 1) < 0.7 ? 1 : -1});
    }
    lay.placements_per_strand.push_back(std::move(path));
  }
  return lay;
}

TEST(SlotInductanceProperty, SymmetricWithNonNegativeDiagonal) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto lay = random_layout(rng, testing::uniform_int(rng, 1, 10), testing::uniform_int(rng, 1, 4), true);
    const Eigen::MatrixXd l = slot_inductance_matrix(lay);
    EXPECT_EQ(l, l.transpose());
    EXPECT_GE(l.diagonal().minCoeff(), 0.0);
  }
}

TEST(Transposition, IdentityScheduleKeepsMatrix) {
  const auto lay = three_strand_layout();
  const auto net = network_from_layout(lay, {1.0, 1.0, 1.0});
  const auto out = apply_transposition(net, lay, TranspositionSchedule::identity(3));
  EXPECT_TRUE(out.inductance.isApprox(net.inductance, 1e-15));
  EXPECT_EQ(out.resistances(), net.resistances());
}

TEST(Transposition, ScheduleErrors) {
  const auto lay = three_strand_layout();
  const auto net = network_from_layout(lay, {1.0, 1.0, 1.0});
  TranspositionSchedule short_fractions{{{0.5, {0, 1, 2}}, {0.4, {1, 2, 0}}}};
  EXPECT_EQ(error_code_of([&] { apply_transposition(net, lay, short_fractions); }),
            ErrorCode::FractionsNotNormalized);
  TranspositionSchedule not_bijective{{{1.0, {0, 0, 2}}}};
  EXPECT_EQ(error_code_of([&] { apply_transposition(net, lay, not_bijective); }), ErrorCode::InvalidPermutation);
  TranspositionSchedule wrong_size{{{1.0, {0, 1}}}};
  EXPECT_EQ(error_code_of([&] { apply_transposition(net, lay, wrong_size); }), ErrorCode::InvalidPermutation);
}

TEST(TranspositionProperty, PreservesSymmetryAndTrace) {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = testing::uniform_int(rng, 2, 8);
    const auto lay = random_layout(rng, n, 2, true);
    const auto net = network_from_layout(lay, std::vector<double>(static_cast<std::size_t>(n), 0.1));
    TranspositionSchedule s;
    const int segments = testing::uniform_int(rng, 1, 4);
    for (int k = 0; k < segments; ++k) {
      std::vector<int> perm(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      s.segments.push_back({1.0 / segments, perm});
    }
    const auto out = apply_transposition(net, lay, s);
    EXPECT_EQ(out.inductance, out.inductance.transpose());
    EXPECT_GT(out.inductance.trace(), 0.0);
    // Permutations only reshuffle the diagonal, so the trace is invariant.
    EXPECT_NEAR(out.inductance.trace(), net.inductance.trace(), 1e-12 * net.inductance.trace());
  }
}

TEST(TranspositionProperty, FullCyclicTranspositionSharesEvenly) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = testing::uniform_int(rng, 2, 12);
    auto lay = random_layout(rng, n, testing::uniform_int(rng, 1, 3), true);
    lay.end_winding_inductance = 1e-7;
    const auto net = network_from_layout(lay, std::vector<double>(static_cast<std::size_t>(n), 0.05));
    const auto full = apply_transposition(net, lay, TranspositionSchedule::full_cyclic(static_cast<std::size_t>(n)));
    const Eigen::VectorXd rows = full.inductance.rowwise().sum();
    EXPECT_LE(rows.maxCoeff() - rows.minCoeff(), 1e-12 * rows.cwiseAbs().maxCoeff());

    const auto drive = testing::random_drive(rng);
    const auto sol = solve_drive(full, drive);
    const double limit = 1e-9 * rms_parseval(drive);
    for (int k = 0; k < 256; ++k) {
      const double t = drive.period() * k / 256;
      const double even = sample(drive, t) / n;
      for (const auto& w : sol.per_strand) EXPECT_LE(std::abs(sample(w, t) - even), limit);
    }
  }
}

}  // namespace
}  // namespace strandcc
