#include "strandcc/solver.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "strandcc/dense_lu.hpp"
#include "strandcc/error.hpp"

namespace strandcc {

namespace {

using cd = std::complex<double>;

void require_valid(const BundleNetwork& net) {
  try {
    validate_structure(net);
  } catch (const Error& e) {
    throw Error(ErrorCode::NetworkInvalid, e.what());
  }
  for (Eigen::Index i = 0; i < net.inductance.rows(); ++i) {
    if (!(net.inductance(i, i) > 0.0)) {
      throw Error(ErrorCode::NetworkInvalid,
                  "strand " + std::to_string(i + 1) + " has non-positive self-inductance");
    }
  }
}

HarmonicSolution conductance_divider(const BundleNetwork& net, cd total) {
  const Eigen::VectorXd g = net.resistances().cwiseInverse();
  const double g_sum = g.sum();
  HarmonicSolution sol;
  sol.angular_frequency = 0.0;
  sol.total_phasor = total;
  sol.strand_phasors = (g / g_sum).cast<cd>() * total;
  sol.terminal_voltage = total / g_sum;
  return sol;
}

class Fnv1a {
 public:
  void add(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      hash_ ^= (v >> (8 * b)) & 0xffU;
      hash_ *= 0x100000001b3ULL;
    }
  }
  void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
  void add(cd v) {
    add(v.real());
    add(v.imag());
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

HarmonicSolution solve_harmonic(const BundleNetwork& net, double omega, cd total_phasor) {
  require_valid(net);
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::NegativeFrequency, "omega must be >= 0, got " + std::to_string(omega));
  }
  if (omega == 0.0) return conductance_divider(net, total_phasor);

  const auto n = static_cast<Eigen::Index>(net.size());
  const Eigen::VectorXd r = net.resistances();

  // Unknowns (I_1..I_n, V/z0). The current constraint row and the voltage
  // column are scaled by a typical impedance z0 so all entries share units.
  double z0 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) z0 = std::max(z0, std::abs(cd(r(i), omega * net.inductance(i, i))));

  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cd(0.0, omega * net.inductance(i, j));
    a(i, i) += r(i);
    a(i, n) = -z0;
    a(n, i) = z0;
  }
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n + 1);
  b(n) = z0 * total_phasor;

  DenseLu<cd> lu;
  if (auto col = lu.factor(a, kSingularPivotThreshold)) {
    throw Error(ErrorCode::SingularSystem,
                "pivot " + std::to_string(*col + 1) + " below threshold at omega = " +
                    std::to_string(omega));
  }
  Eigen::VectorXcd x = lu.solve(b);
  // One step of iterative refinement tightens the KVL residual.
  const Eigen::VectorXcd residual = b - a * x;
  x += lu.solve(residual);

  HarmonicSolution sol;
  sol.angular_frequency = omega;
  sol.total_phasor = total_phasor;
  sol.strand_phasors = x.head(n);
  sol.terminal_voltage = z0 * x(n);
  return sol;
}

double kvl_residual(const BundleNetwork& net, const HarmonicSolution& sol) {
  const Eigen::VectorXd r = net.resistances();
  const Eigen::VectorXcd drop =
      r.cast<cd>().cwiseProduct(sol.strand_phasors) +
      cd(0.0, sol.angular_frequency) * (net.inductance.cast<cd>() * sol.strand_phasors);
  return (drop.array() - sol.terminal_voltage).abs().maxCoeff();
}

SolvedBundle solve_drive(const BundleNetwork& net, const Waveform& drive) {
  const std::size_t n = net.size();
  const double omega1 = 2.0 * std::numbers::pi / drive.period();

  std::vector<HarmonicSolution> per_harmonic;
  per_harmonic.reserve(drive.harmonics().size() + 1);
  try {
    per_harmonic.push_back(solve_harmonic(net, 0.0, drive.dc()));
  } catch (const Error& e) {
    throw Error(e.code(), std::string("DC term: ") + e.what(), 0);
  }
  per_harmonic.back().order = 0;
  for (const auto& h : drive.harmonics()) {
    try {
      per_harmonic.push_back(solve_harmonic(net, omega1 * h.order, h.phasor()));
    } catch (const Error& e) {
      throw Error(e.code(), "harmonic " + std::to_string(h.order) + ": " + e.what(), h.order);
    }
    per_harmonic.back().order = h.order;
  }

  std::vector<int> orders;
  for (const auto& h : drive.harmonics()) orders.push_back(h.order);

  SolvedBundle out{net, drive, {}, std::move(per_harmonic), 0};
  out.per_strand.reserve(n);
  std::vector<cd> phasors(orders.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t k = 0; k < orders.size(); ++k) phasors[k] = out.per_harmonic[k + 1].strand_phasors(ii);
    out.per_strand.push_back(Waveform::from_phasors(
        drive.period(), out.per_harmonic[0].strand_phasors(ii).real(), orders, phasors));
  }

  Fnv1a hash;
  hash.add(static_cast<std::uint64_t>(n));
  hash.add(drive.period());
  for (const auto& h : out.per_harmonic) {
    hash.add(static_cast<std::uint64_t>(h.order));
    hash.add(h.total_phasor);
    for (Eigen::Index i = 0; i < h.strand_phasors.size(); ++i) hash.add(h.strand_phasors(i));
  }
  for (const auto& s : net.strands) hash.add(s.r_dc);
  out.fingerprint = hash.value();
  return out;
}

std::size_t SharingFunctions::unmasked_count() const {
  std::size_t c = 0;
  for (bool m : masked) c += m ? 0 : 1;
  return c;
}

SharingFunctions sharing_functions(const SolvedBundle& sol, int grid_size, double zero_threshold) {
  if (grid_size < 64) {
    throw Error(ErrorCode::GridTooSmall, "grid_size must be >= 64, got " + std::to_string(grid_size));
  }
  const auto n = static_cast<Eigen::Index>(sol.strand_count());
  const double period = sol.drive.period();
  const double cutoff = zero_threshold * rms_parseval(sol.drive);

  SharingFunctions out;
  out.fingerprint = sol.fingerprint;
  out.times.resize(static_cast<std::size_t>(grid_size));
  out.masked.assign(static_cast<std::size_t>(grid_size), true);
  out.alpha = Eigen::MatrixXd::Constant(n, grid_size, std::numeric_limits<double>::quiet_NaN());

  bool any = false;
  for (int k = 0; k < grid_size; ++k) {
    const double t = period * k / grid_size;
    out.times[static_cast<std::size_t>(k)] = t;
    const double total = sample(sol.drive, t);
    if (!(std::abs(total) > cutoff)) continue;
    out.masked[static_cast<std::size_t>(k)] = false;
    any = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      out.alpha(i, k) = sample(sol.per_strand[static_cast<std::size_t>(i)], t) / total;
    }
  }
  if (!any) {
    throw Error(ErrorCode::AllPointsMasked, "total current is ~0 at every grid point");
  }
  return out;
}

}  // namespace strandcc
