#include <gtest/gtest.h>

#include <cmath>

#include "expect_error.hpp"
#include "generators.hpp"
#include "strandcc/solver.hpp"

namespace strandcc {
namespace {

using cd = std::complex<double>;
using testing::error_code_of;
using testing::Rng;

double rel_err(cd got, cd want) { return std::abs(got - want) / std::abs(want); }

TEST(SolveHarmonic, IdenticalStrandsSplitEvenly) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Constant(4, 4, 0.3e-3);
  l.diagonal().setConstant(1e-3);
  const auto net = make_network({0.2, 0.2, 0.2, 0.2}, l);
  const cd total(8.0, -3.0);
  const auto sol = solve_harmonic(net, 2 * std::numbers::pi * 400, total);
  for (int i = 0; i < 4; ++i) EXPECT_LT(rel_err(sol.strand_phasors(i), total / 4.0), 1e-14);
}

TEST(SolveHarmonic, TwoStrandClosedForm) {
  const auto d = testing::reference_divider();
  const cd total(10.0, 0.0);
  const auto sol = solve_harmonic(d.network(), d.omega, total);
  EXPECT_LT(rel_err(sol.strand_phasors(0) / sol.strand_phasors(1), d.ratio()), 1e-10);
  // Frozen from the closed form.
  EXPECT_LT(rel_err(sol.strand_phasors(0), cd(5.224575405884312, 0.7148457188671384)), 1e-12);
  EXPECT_LT(rel_err(sol.terminal_voltage, cd(5.112287702942155, 3.106316431324638)), 1e-12);
}

TEST(SolveHarmonic, DcConductanceDivider) {
  const auto net = make_network({1.0, 2.0, 4.0}, Eigen::MatrixXd::Identity(3, 3) * 1e-3);
  const auto sol = solve_harmonic(net, 0.0, 7.0);
  EXPECT_NEAR(sol.strand_phasors(0).real(), 4.0, 1e-14);
  EXPECT_NEAR(sol.strand_phasors(1).real(), 2.0, 1e-14);
  EXPECT_NEAR(sol.strand_phasors(2).real(), 1.0, 1e-14);
  EXPECT_NEAR(sol.terminal_voltage.real(), 4.0, 1e-14);
}

TEST(SolveHarmonic, Errors) {
  const auto d = testing::reference_divider();
  EXPECT_EQ(error_code_of([&] { solve_harmonic(d.network(), -1.0, 1.0); }), ErrorCode::NegativeFrequency);
  EXPECT_EQ(error_code_of([&] { solve_harmonic(make_network({1.0, 1.0}, std::vector<double>{1e-3, 0.0, 1e-4, 1e-3}), 1.0, 1.0); }),
            ErrorCode::NetworkInvalid);
  // Perfectly coupled strands whose resistance is 1e-18 of the reactance.
  const auto stiff = make_network({1e-12, 1e-12}, std::vector<double>{1.0, 1.0, 1.0, 1.0});
  EXPECT_EQ(error_code_of([&] { solve_harmonic(stiff, 1e6, 1.0); }), ErrorCode::SingularSystem);
}

TEST(SolveDrive, SingularHarmonicIsTagged) {
  const auto stiff = make_network({1e-12, 1e-12}, std::vector<double>{1.0, 1.0, 1.0, 1.0});
  const auto drive = Waveform::from_harmonics(1e-5, 1.0, {{3, 1.0, 0.0}});
  try {
    solve_drive(stiff, drive);
    FAIL() << "expected SingularSystem";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularSystem);
    EXPECT_EQ(e.harmonic_order(), 3);
  }
}

TEST(SolveDrive, ZeroDriveGivesZeroCurrents) {
  Rng rng(1);
  const auto net = testing::random_network(rng, 5);
  const auto sol = solve_drive(net, Waveform::from_harmonics(0.02, 0.0, {{1, 0.0, 0.0}, {3, 0.0, 0.0}}));
  for (const auto& w : sol.per_strand) EXPECT_EQ(rms_parseval(w), 0.0);
}

TEST(SolveDrive, SymmetricBundleScalesDrive) {
  Rng rng(2);
  const auto net = testing::random_symmetric_network(rng, 6);
  const auto drive = testing::random_drive(rng);
  const auto sol = solve_drive(net, drive);
  for (const auto& w : sol.per_strand) {
    const auto diff = waveform_linear_combine(1.0, w, -1.0 / 6.0, drive);
    EXPECT_LE(rms_parseval(diff), 1e-13 * rms_parseval(drive));
  }
}

TEST(SolverProperty, ConservationAndKvl) {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = testing::uniform_int(rng, 2, 12);
    const auto net = testing::random_network(rng, n);
    const auto drive = testing::random_drive(rng);
    const auto sol = solve_drive(net, drive);
    const double scale = std::max(1.0, rms_parseval(drive));
    for (int k = 0; k < 1024; ++k) {
      const double t = testing::uniform(rng, 0.0, 10.0 * drive.period());
      double sum = 0.0;
      for (const auto& w : sol.per_strand) sum += sample(w, t);
      ASSERT_LE(std::abs(sum - sample(drive, t)), 1e-9 * scale) << trial;
    }
    for (const auto& h : sol.per_harmonic) {
      EXPECT_LE(std::abs(h.strand_phasors.sum() - h.total_phasor), 1e-10 * std::abs(h.total_phasor) + 1e-300);
      EXPECT_LE(kvl_residual(net, h), 1e-10 * std::abs(h.terminal_voltage) + 1e-18) << trial << " order " << h.order;
    }
  }
}

TEST(SolverProperty, LinearityAndSuperposition) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = testing::uniform_int(rng, 2, 8);
    const auto net = testing::random_network(rng, n);
    const double period = testing::uniform(rng, 1e-3, 0.05);
    const auto w1 = testing::random_drive(rng, 6, 12, period);
    const auto w2 = testing::random_drive(rng, 6, 12, period);
    const double a = testing::uniform(rng, -5.0, 5.0);

    const auto s1 = solve_drive(net, w1);
    const auto s2 = solve_drive(net, w2);
    const auto scaled_sol = solve_drive(net, scaled(w1, a));
    const auto sum_sol = solve_drive(net, waveform_linear_combine(1.0, w1, 1.0, w2));
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      const auto lin = waveform_linear_combine(1.0, scaled_sol.per_strand[i], -a, s1.per_strand[i]);
      EXPECT_LE(rms_parseval(lin), 1e-10 * std::abs(a) * rms_parseval(s1.per_strand[i]));
      const auto sup = waveform_linear_combine(1.0, sum_sol.per_strand[i], -1.0,
                                               waveform_linear_combine(1.0, s1.per_strand[i], 1.0, s2.per_strand[i]));
      EXPECT_LE(rms_parseval(sup), 1e-10 * rms_parseval(sum_sol.per_strand[i]));
    }
  }
}

TEST(SharingFunctions, EvenSharing) {
  Rng rng(3);
  const auto net = testing::random_symmetric_network(rng, 5);
  const auto sol = solve_drive(net, testing::random_drive(rng));
  const auto shares = sharing_functions(sol, 256);
  EXPECT_GT(shares.unmasked_count(), 0U);
  for (std::size_t k = 0; k < shares.masked.size(); ++k) {
    if (shares.masked[k]) continue;
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(shares.alpha(i, static_cast<Eigen::Index>(k)), 0.2, 1e-9);
  }
}

TEST(SharingFunctions, TwoStrandClosedForm) {
  const auto d = testing::reference_divider();
  const cd total(10.0, 0.0);
  const auto drive = testing::sinusoid(2 * std::numbers::pi / d.omega, 10.0);
  const auto sol = solve_drive(d.network(), drive);
  const auto shares = sharing_functions(sol, 512);
  for (std::size_t k = 0; k < shares.masked.size(); ++k) {
    if (shares.masked[k]) continue;
    const double t = shares.times[k];
    const double i1 = testing::phasor_at(d.strand1(total), d.omega, t);
    const double it = testing::phasor_at(total, d.omega, t);
    EXPECT_NEAR(shares.alpha(0, static_cast<Eigen::Index>(k)), i1 / it, 1e-9 * std::max(1.0, std::abs(i1 / it)));
  }
}

TEST(SharingFunctions, Errors) {
  Rng rng(4);
  const auto net = testing::random_network(rng, 3);
  const auto zero = solve_drive(net, Waveform::zero(0.02));
  EXPECT_EQ(error_code_of([&] { sharing_functions(zero, 128); }), ErrorCode::AllPointsMasked);
  const auto sol = solve_drive(net, testing::sinusoid(0.02, 1.0));
  EXPECT_EQ(error_code_of([&] { sharing_functions(sol, 63); }), ErrorCode::GridTooSmall);
}

TEST(SharingFunctions, MasksZeroCrossings) {
  Rng rng(5);
  const auto net = testing::random_network(rng, 3);
  // cos(2 pi t / T) vanishes exactly at t = T/4 and 3T/4, both on a 64 grid.
  const auto sol = solve_drive(net, testing::sinusoid(1.0, 1.0));
  const auto shares = sharing_functions(sol, 64);
  EXPECT_TRUE(shares.masked[16]);
  EXPECT_TRUE(shares.masked[48]);
  EXPECT_EQ(shares.unmasked_count(), 62U);
  EXPECT_TRUE(std::isnan(shares.alpha(0, 16)));
}

// Transient oracle.

double relative_rms(const SolvedBundle& sol, const TransientSamples& s, std::size_t i) {
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    const double r = sample(sol.per_strand[i], s.times[k]);
    const double diff = s.currents(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) - r;
    err += diff * diff;
    ref += r * r;
  }
  return std::sqrt(err / ref);
}

TEST(TransientOracle, SymmetricBundleSettlesToEvenSplit) {
  Rng rng(12);
  // Unit resistances keep the differential time constant near 0.1 period,
  // so the start-up transient is gone after 10 periods.
  auto net = testing::random_symmetric_network(rng, 4);
  for (auto& s : net.strands) s.r_dc = 1.0;
  const auto drive = testing::sinusoid(0.02, 10.0, 0.3);
  // Trapezoidal error is O((wh)^2 / 12): about 2e-7 relative at 2048 steps.
  const auto s = transient_oracle(net, drive, 2048, 10);
  ASSERT_EQ(s.times.size(), 2048U);
  const double rms = rms_parseval(drive);
  for (Eigen::Index k = 0; k < s.currents.cols(); ++k) {
    for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(s.currents(i, k), s.total[static_cast<std::size_t>(k)] / 4, 1e-6 * rms);
  }
}

TEST(TransientOracle, TwoStrandAgreesWithPhasors) {
  const auto d = testing::reference_divider();
  const auto drive = testing::sinusoid(0.02, 10.0);
  const auto sol = solve_drive(d.network(), drive);
  const auto s = transient_oracle(d.network(), drive, 2048, 10);
  EXPECT_LT(relative_rms(sol, s, 0), 1e-3);
  EXPECT_LT(relative_rms(sol, s, 1), 1e-3);
}

TEST(TransientOracle, MultiHarmonicDriveAgrees) {
  Rng rng(13);
  const auto net = testing::random_network(rng, 4);
  const auto drive = Waveform::from_harmonics(0.02, 2.0, {{1, 10.0, 0.0}, {5, 2.0, 0.7}, {7, 1.0, -1.0}});
  const auto sol = solve_drive(net, drive);
  const auto s = transient_oracle(net, drive, 4096, 10);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LT(relative_rms(sol, s, i), 1e-3);
}

TEST(TransientOracle, DegenerateNetworks) {
  const auto coupled = make_network({1.0, 1.0, 1.0}, Eigen::MatrixXd::Constant(3, 3, 1e-3));
  const auto drive = testing::sinusoid(0.02, 1.0);
  EXPECT_EQ(error_code_of([&] { transient_oracle(coupled, drive, 512, 5); }), ErrorCode::ReducedMatrixSingular);

  const auto resistive = make_network({1.0, 2.0, 4.0}, Eigen::MatrixXd::Zero(3, 3));
  const auto s = transient_oracle(resistive, Waveform::from_harmonics(0.02, 7.0, {}), 512, 5);
  EXPECT_TRUE(s.resistive_fallback);
  EXPECT_NEAR(s.currents(0, 100), 4.0, 1e-14);
  EXPECT_NEAR(s.currents(1, 100), 2.0, 1e-14);
  EXPECT_NEAR(s.currents(2, 100), 1.0, 1e-14);
}

TEST(TransientOracle, RejectsCoarseSettings) {
  const auto d = testing::reference_divider();
  const auto drive = testing::sinusoid(0.02, 1.0);
  EXPECT_EQ(error_code_of([&] { transient_oracle(d.network(), drive, 511, 10); }), ErrorCode::StepTooCoarse);
  EXPECT_EQ(error_code_of([&] { transient_oracle(d.network(), drive, 512, 4); }), ErrorCode::SettleTooShort);
}

}  // namespace
}  // namespace strandcc
