#include "strandcc/app/report.hpp"

#include <cmath>
#include <cstdio>

namespace strandcc::app {

using nlohmann::json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex_fingerprint(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

std::string strand_column(std::size_t i, const char* prefix, const char* suffix) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%02zu%s", prefix, i + 1, suffix);
  return buf;
}

}  // namespace

std::string currents_csv(const SolvedBundle& sol, int grid_size) {
  std::string out = "time_s,total_A";
  for (std::size_t i = 0; i < sol.strand_count(); ++i) out += "," + strand_column(i, "strand_", "_A");
  out += '\n';
  const double period = sol.drive.period();
  for (int k = 0; k < grid_size; ++k) {
    const double t = period * k / grid_size;
    out += format_number(t);
    out += ',';
    out += format_number(sample(sol.drive, t));
    for (const auto& w : sol.per_strand) {
      out += ',';
      out += format_number(sample(w, t));
    }
    out += '\n';
  }
  return out;
}

std::string sharing_csv(const SolvedBundle& sol, const SharingFunctions& shares) {
  std::string out = "time_s,total_A,masked";
  for (std::size_t i = 0; i < shares.strand_count(); ++i) out += "," + strand_column(i, "alpha_", "");
  out += '\n';
  for (std::size_t k = 0; k < shares.times.size(); ++k) {
    const double t = shares.times[k];
    out += format_number(t);
    out += ',';
    out += format_number(sample(sol.drive, t));
    out += shares.masked[k] ? ",1" : ",0";
    for (Eigen::Index i = 0; i < shares.alpha.rows(); ++i) {
      out += ',';
      if (!shares.masked[k]) out += format_number(shares.alpha(i, static_cast<Eigen::Index>(k)));
    }
    out += '\n';
  }
  return out;
}

OracleCheck compare_with_oracle(const SolvedBundle& sol, const TransientSamples& samples, double tolerance) {
  OracleCheck check;
  check.ran = true;
  check.tolerance = tolerance;
  check.resistive_fallback = samples.resistive_fallback;
  const auto steps = static_cast<Eigen::Index>(samples.times.size());
  for (std::size_t i = 0; i < sol.strand_count(); ++i) {
    double err2 = 0.0;
    double ref2 = 0.0;
    for (Eigen::Index k = 0; k < steps; ++k) {
      const double ref = sample(sol.per_strand[i], samples.times[static_cast<std::size_t>(k)]);
      const double diff = samples.currents(static_cast<Eigen::Index>(i), k) - ref;
      err2 += diff * diff;
      ref2 += ref * ref;
    }
    const double rel = ref2 > 0.0 ? std::sqrt(err2 / ref2) : std::sqrt(err2 / static_cast<double>(steps));
    if (rel > check.max_relative_rms_error) {
      check.max_relative_rms_error = rel;
      check.worst_strand = i;
    }
  }
  return check;
}

json loss_report_json(const LossReport& report, const SolvedBundle& sol) {
  json strands = json::array();
  for (std::size_t i = 0; i < report.strand_count(); ++i) {
    strands.push_back({{"index", i + 1},
                       {"label", sol.network.strands[i].label},
                       {"r_dc", report.resistances[i]},
                       {"rms_A", report.per_strand_rms[i]},
                       {"baseline_rms_A", report.baseline_rms[i]},
                       {"cc_loss_W", report.per_strand_cc_losses[i]},
                       {"baseline_loss_W", report.per_strand_baseline_losses[i]}});
  }
  const auto& d = report.detection;
  json harmonics = json::array();
  for (const auto& h : sol.per_harmonic) {
    harmonics.push_back({{"order", h.order},
                         {"angular_frequency", h.angular_frequency},
                         {"total_phasor", {h.total_phasor.real(), h.total_phasor.imag()}},
                         {"terminal_voltage", {h.terminal_voltage.real(), h.terminal_voltage.imag()}},
                         {"kvl_residual_V", kvl_residual(sol.network, h)}});
  }
  return {
      {"fingerprint", hex_fingerprint(report.fingerprint)},
      {"strand_count", report.strand_count()},
      {"drive_rms_A", report.drive_rms},
      {"bundle_dc_resistance_ohm", report.bundle_dc_resistance},
      {"strands", std::move(strands)},
      {"total_cc_losses_W", report.total_cc_losses},
      {"total_baseline_losses_W", report.total_baseline_losses},
      {"excess_losses_W", report.excess_losses},
      {"loss_ratio", report.loss_ratio ? json(*report.loss_ratio) : json(nullptr)},
      {"loss_ratio_defined", report.loss_ratio.has_value()},
      {"detection",
       {{"occurred", d.occurred},
        {"threshold_A", d.threshold},
        {"max_deviation_A", d.max_deviation},
        {"deviation_strand", d.deviation_strand + 1},
        {"deviation_time_s", d.deviation_time},
        {"max_phasor_deviation_A", d.max_phasor_deviation},
        {"phasor_deviation_strand", d.phasor_deviation_strand + 1},
        {"phasor_deviation_order", d.phasor_deviation_order}}},
      {"property",
       {{"status", std::string(to_string(report.property.status))},
        {"margin_W", report.property.margin_watts},
        {"margin_floor_W", report.property.margin_floor},
        {"detail", report.property.detail}}},
      {"harmonics", std::move(harmonics)},
  };
}

}  // namespace strandcc::app
