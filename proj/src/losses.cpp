#include "strandcc/losses.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "strandcc/error.hpp"

namespace strandcc {

namespace {

/// Time average of a(t) * b(t) over one period.
double mean_product(const Waveform& a, const Waveform& b) {
  double acc = a.dc() * b.dc();
  for (const auto& h : a.harmonics()) {
    acc += 0.5 * (h.phasor() * std::conj(b.phasor_of(h.order))).real();
  }
  return acc;
}

std::vector<Waveform> deviations(const SolvedBundle& sol) {
  const double inv_n = 1.0 / static_cast<double>(sol.strand_count());
  std::vector<Waveform> out;
  out.reserve(sol.strand_count());
  for (const auto& strand : sol.per_strand) {
    out.push_back(waveform_linear_combine(1.0, strand, -inv_n, sol.drive));
  }
  return out;
}

bool equal_resistances(const std::vector<double>& r) {
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  return *hi - *lo <= 1e-12 * *hi;
}

}  // namespace

std::string_view to_string(PropertyStatus status) noexcept {
  switch (status) {
    case PropertyStatus::Holds: return "holds";
    case PropertyStatus::Violated: return "violated";
    case PropertyStatus::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

Waveform baseline_strand_current(const Waveform& drive, int n) {
  if (n < 2) {
    throw Error(ErrorCode::InvalidStrandCount, "a bundle needs n >= 2, got " + std::to_string(n));
  }
  return scaled(drive, 1.0 / n);
}

DetectionVerdict detect_circulating(const SolvedBundle& sol, double abs_tol, double rel_tol) {
  if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0)) {
    throw Error(ErrorCode::NegativeTolerance, "detection tolerances must be >= 0");
  }
  const auto n = sol.strand_count();
  DetectionVerdict v;
  v.fingerprint = sol.fingerprint;
  v.component_count = sol.drive.harmonics().size() + 1;
  v.threshold = abs_tol + rel_tol * rms_parseval(sol.drive) / static_cast<double>(n);

  const auto dev = deviations(sol);
  const double period = sol.drive.period();
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < kDetectionGrid; ++k) {
      const double t = period * k / kDetectionGrid;
      const double d = std::abs(sample(dev[i], t));
      if (d > v.max_deviation) {
        v.max_deviation = d;
        v.deviation_strand = i;
        v.deviation_time = t;
      }
    }
    if (std::abs(dev[i].dc()) > v.max_phasor_deviation) {
      v.max_phasor_deviation = std::abs(dev[i].dc());
      v.phasor_deviation_strand = i;
      v.phasor_deviation_order = 0;
    }
    for (const auto& h : dev[i].harmonics()) {
      if (h.amplitude > v.max_phasor_deviation) {
        v.max_phasor_deviation = h.amplitude;
        v.phasor_deviation_strand = i;
        v.phasor_deviation_order = h.order;
      }
    }
  }
  v.occurred = v.max_deviation > v.threshold || v.max_phasor_deviation > v.threshold;
  return v;
}

LossReport compute_losses(const SolvedBundle& sol, const LossOptions& options) {
  const auto n = sol.strand_count();
  LossReport rep;
  rep.fingerprint = sol.fingerprint;
  rep.drive_rms = rms_parseval(sol.drive);

  const Waveform baseline = baseline_strand_current(sol.drive, static_cast<int>(n));
  const double baseline_rms = rms_parseval(baseline);
  const auto dev = deviations(sol);

  double conductance = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = sol.network.strands[i].r_dc;
    const double rms = rms_parseval(sol.per_strand[i]);
    rep.resistances.push_back(r);
    rep.per_strand_rms.push_back(rms);
    rep.baseline_rms.push_back(baseline_rms);
    rep.per_strand_cc_losses.push_back(r * rms * rms);
    rep.per_strand_baseline_losses.push_back(r * baseline_rms * baseline_rms);
    rep.total_cc_losses += rep.per_strand_cc_losses.back();
    rep.total_baseline_losses += rep.per_strand_baseline_losses.back();
    const double d_rms = rms_parseval(dev[i]);
    rep.excess_losses += r * (d_rms * d_rms + 2.0 * mean_product(dev[i], baseline));
    conductance += 1.0 / r;
  }
  rep.bundle_dc_resistance = 1.0 / conductance;
  if (rep.total_baseline_losses > 0.0) {
    rep.loss_ratio = rep.total_cc_losses / rep.total_baseline_losses;
  }
  rep.detection = detect_circulating(sol, options.abs_tol, options.rel_tol);
  rep.property = check_fundamental_property(rep, rep.detection, options.equality_tol);
  return rep;
}

PropertyVerdict check_fundamental_property(const LossReport& report,
                                           const DetectionVerdict& detection,
                                           double equality_tol) {
  if (report.fingerprint != detection.fingerprint) {
    throw Error(ErrorCode::InconsistentInputs, "loss report and detection come from different solves");
  }
  PropertyVerdict v;
  v.margin_watts = report.excess_losses;
  const double p_cc = report.total_cc_losses;
  const double p_base = report.total_baseline_losses;
  char buf[256];

  if (!equal_resistances(report.resistances)) {
    v.status = PropertyStatus::NotApplicable;
    v.detail = "strand resistances differ; the even split is not the loss minimum";
    return v;
  }

  if (p_base > p_cc + 1e-9 * std::max(p_cc, 1e-30)) {
    v.status = PropertyStatus::Violated;
    std::snprintf(buf, sizeof buf, "baseline losses %.17g W exceed circulating-current losses %.17g W",
                  p_base, p_cc);
    v.detail = buf;
    return v;
  }

  if (detection.occurred) {
    // |d(t)| <= sqrt(2 * components) * rms(d) for a finite cosine series and
    // a single component of amplitude A has rms >= A / sqrt(2).
    const double r = report.resistances.front();
    const double components = static_cast<double>(std::max<std::size_t>(detection.component_count, 1));
    const double implied =
        std::max(detection.max_deviation * detection.max_deviation / (2.0 * components),
                 0.5 * detection.max_phasor_deviation * detection.max_phasor_deviation);
    v.margin_floor = (1.0 - 1e-6) * r * implied;
    if (v.margin_watts > v.margin_floor && v.margin_watts > 0.0) {
      v.status = PropertyStatus::Holds;
      std::snprintf(buf, sizeof buf, "circulating currents detected and P_CC exceeds P_CC=0 by %.6g W",
                    v.margin_watts);
    } else {
      v.status = PropertyStatus::Violated;
      std::snprintf(buf, sizeof buf,
                    "circulating currents detected but the loss excess %.6g W is below %.6g W",
                    v.margin_watts, v.margin_floor);
    }
  } else {
    if (std::abs(p_cc - p_base) <= equality_tol * p_cc) {
      v.status = PropertyStatus::Holds;
      std::snprintf(buf, sizeof buf, "no circulating currents and P_CC = P_CC=0 (difference %.3g W)",
                    p_cc - p_base);
    } else {
      v.status = PropertyStatus::Violated;
      std::snprintf(buf, sizeof buf,
                    "no circulating currents detected but P_CC - P_CC=0 = %.6g W exceeds tolerance",
                    p_cc - p_base);
    }
  }
  v.detail = buf;
  return v;
}

CauchySchwarzWitness cauchy_schwarz_witness(const SharingFunctions& shares) {
  const auto n = static_cast<Eigen::Index>(shares.strand_count());
  const double lower = 1.0 / static_cast<double>(n);
  CauchySchwarzWitness w;
  bool first = true;
  for (std::size_t k = 0; k < shares.masked.size(); ++k) {
    if (shares.masked[k]) continue;
    const auto col = shares.alpha.col(static_cast<Eigen::Index>(k));
    WitnessPoint p;
    p.grid_index = k;
    p.sum_alpha = col.sum();
    p.sum_alpha_sq = col.squaredNorm();
    const double sum_error = std::abs(p.sum_alpha - 1.0);
    const double gap = p.sum_alpha_sq - lower;
    p.sum_ok = sum_error <= 1e-9;
    p.bound_ok = gap >= -1e-12;
    w.all_pass = w.all_pass && p.sum_ok && p.bound_ok;
    w.max_sum_error = std::max(w.max_sum_error, sum_error);
    if (first || gap < w.min_gap) w.min_gap = gap;
    if (first || p.sum_alpha_sq > w.max_sum_alpha_sq) {
      w.max_sum_alpha_sq = p.sum_alpha_sq;
      w.max_imbalance_index = k;
      w.max_imbalance_time = shares.times[k];
    }
    first = false;
    w.points.push_back(p);
  }
  return w;
}

}  // namespace strandcc
