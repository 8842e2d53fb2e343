#include <cmath>
#include <string>

#include "strandcc/dense_lu.hpp"
#include "strandcc/error.hpp"
#include "strandcc/solver.hpp"

namespace strandcc {

namespace {

constexpr double kReducedSingularThreshold = 1e-12;

TransientSamples resistive_divider(const BundleNetwork& net, const Waveform& drive, int steps) {
  const Eigen::VectorXd g = net.resistances().cwiseInverse();
  const Eigen::VectorXd share = g / g.sum();
  const double h = drive.period() / steps;

  TransientSamples out;
  out.resistive_fallback = true;
  out.currents.resize(static_cast<Eigen::Index>(net.size()), steps);
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const double total = sample(drive, t);
    out.times.push_back(t);
    out.total.push_back(total);
    out.currents.col(k) = share * total;
  }
  return out;
}

}  // namespace

TransientSamples transient_oracle(const BundleNetwork& net, const Waveform& drive,
                                  int steps_per_period, int settle_periods) {
  if (steps_per_period < 512) {
    throw Error(ErrorCode::StepTooCoarse,
                "need >= 512 steps per period, got " + std::to_string(steps_per_period));
  }
  if (settle_periods < 5) {
    throw Error(ErrorCode::SettleTooShort,
                "need >= 5 settle periods, got " + std::to_string(settle_periods));
  }
  try {
    validate_structure(net);
  } catch (const Error& e) {
    throw Error(ErrorCode::NetworkInvalid, e.what());
  }
  if (net.inductance.cwiseAbs().maxCoeff() == 0.0) {
    return resistive_divider(net, drive, steps_per_period);
  }

  const auto n = static_cast<Eigen::Index>(net.size());
  const Eigen::Index m = n - 1;  // eliminated strand
  const Eigen::VectorXd r = net.resistances();
  const Eigen::MatrixXd& l = net.inductance;

  Eigen::MatrixXd reduced_l(m, m);
  Eigen::MatrixXd reduced_g = Eigen::MatrixXd::Constant(m, m, r(m));
  Eigen::VectorXd drive_coupling(m);  // L_im - L_mm
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) reduced_l(i, j) = l(i, j) - l(m, j) - l(i, m) + l(m, m);
    reduced_g(i, i) += r(i);
    drive_coupling(i) = l(i, m) - l(m, m);
  }

  DenseLu<double> check;
  if (check.factor(reduced_l, kReducedSingularThreshold)) {
    throw Error(ErrorCode::ReducedMatrixSingular,
                "reduced inductance matrix is singular; the bundle is not an index-1 DAE");
  }

  const double h = drive.period() / steps_per_period;
  const Eigen::MatrixXd lhs = reduced_l / h + 0.5 * reduced_g;
  const Eigen::MatrixXd rhs = reduced_l / h - 0.5 * reduced_g;
  DenseLu<double> stepper;
  if (stepper.factor(lhs, kSingularPivotThreshold)) {
    throw Error(ErrorCode::ReducedMatrixSingular, "trapezoidal step matrix is singular");
  }

  auto forcing = [&](double t) -> Eigen::VectorXd {
    return r(m) * sample(drive, t) * Eigen::VectorXd::Ones(m) -
           sample_derivative(drive, t) * drive_coupling;
  };

  TransientSamples out;
  out.currents.resize(n, steps_per_period);
  out.times.reserve(static_cast<std::size_t>(steps_per_period));
  out.total.reserve(static_cast<std::size_t>(steps_per_period));

  const long total_steps = static_cast<long>(settle_periods) * steps_per_period;
  const long record_from = total_steps - steps_per_period;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd b_prev = forcing(0.0);
  for (long s = 0; s < total_steps; ++s) {
    if (s >= record_from) {
      const int k = static_cast<int>(s - record_from);
      const double t = k * h;
      const double total = sample(drive, t);
      out.times.push_back(t);
      out.total.push_back(total);
      out.currents.col(k).head(m) = x;
      out.currents(m, k) = total - x.sum();
    }
    // Time measured from the start of the run; the drive is periodic.
    const double t_next = static_cast<double>((s + 1) % steps_per_period) * h;
    const Eigen::VectorXd b_next = forcing(t_next);
    x = stepper.solve(rhs * x + 0.5 * (b_prev + b_next));
    b_prev = b_next;
  }
  return out;
}

}  // namespace strandcc
