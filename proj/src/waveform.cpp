#include "strandcc/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "strandcc/error.hpp"

namespace strandcc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce_time(double t, double period) {
  double r = std::fmod(t, period);
  if (r < 0.0) r += period;
  return r;
}

void require_same_period(const Waveform& a, const Waveform& b) {
  const double scale = std::max(std::abs(a.period()), std::abs(b.period()));
  if (std::abs(a.period() - b.period()) > 1e-12 * scale) {
    throw Error(ErrorCode::PeriodMismatch,
                "periods " + std::to_string(a.period()) + " and " +
                    std::to_string(b.period()) + " differ");
  }
}

}  // namespace

Waveform Waveform::from_harmonics(double period, double dc,
                                  std::vector<Harmonic> harmonics) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw Error(ErrorCode::NonPositivePeriod,
                "period must be positive, got " + std::to_string(period));
  }
  for (const auto& h : harmonics) {
    if (h.order < 1) {
      throw Error(ErrorCode::InvalidHarmonicOrder,
                  "harmonic order must be >= 1, got " + std::to_string(h.order));
    }
    if (!(h.amplitude >= 0.0)) {
      throw Error(ErrorCode::NegativeAmplitude,
                  "harmonic " + std::to_string(h.order) +
                      " has negative amplitude");
    }
  }
  std::sort(harmonics.begin(), harmonics.end(),
            [](const Harmonic& l, const Harmonic& r) { return l.order < r.order; });
  auto dup = std::adjacent_find(
      harmonics.begin(), harmonics.end(),
      [](const Harmonic& l, const Harmonic& r) { return l.order == r.order; });
  if (dup != harmonics.end()) {
    throw Error(ErrorCode::DuplicateHarmonicOrder,
                "harmonic order " + std::to_string(dup->order) + " repeated");
  }
  return Waveform(period, dc, std::move(harmonics));
}

Waveform Waveform::from_phasors(double period, double dc,
                                std::span<const int> orders,
                                std::span<const std::complex<double>> phasors) {
  if (orders.size() != phasors.size()) {
    throw Error(ErrorCode::DimensionMismatch, "orders and phasors differ in length");
  }
  std::vector<Harmonic> hs;
  hs.reserve(orders.size());
  for (std::size_t k = 0; k < orders.size(); ++k) {
    hs.push_back({orders[k], std::abs(phasors[k]), std::arg(phasors[k])});
  }
  return from_harmonics(period, dc, std::move(hs));
}

Waveform Waveform::zero(double period) { return from_harmonics(period, 0.0, {}); }

std::complex<double> Waveform::phasor_of(int order) const {
  auto it = std::lower_bound(
      harmonics_.begin(), harmonics_.end(), order,
      [](const Harmonic& h, int o) { return h.order < o; });
  if (it == harmonics_.end() || it->order != order) return {0.0, 0.0};
  return it->phasor();
}

double sample(const Waveform& w, double t) {
  const double tau = reduce_time(t, w.period()) / w.period();
  double value = w.dc();
  for (const auto& h : w.harmonics()) {
    value += h.amplitude * std::cos(kTwoPi * h.order * tau + h.phase);
  }
  return value;
}

double sample_derivative(const Waveform& w, double t) {
  const double tau = reduce_time(t, w.period()) / w.period();
  double value = 0.0;
  for (const auto& h : w.harmonics()) {
    const double omega = kTwoPi * h.order / w.period();
    value -= h.amplitude * omega * std::sin(kTwoPi * h.order * tau + h.phase);
  }
  return value;
}

double rms_parseval(const Waveform& w) {
  double mean_square = w.dc() * w.dc();
  for (const auto& h : w.harmonics()) mean_square += 0.5 * h.amplitude * h.amplitude;
  return std::sqrt(mean_square);
}

double rms_integrate(const Waveform& w, int n_samples) {
  if (n_samples < 16) {
    throw Error(ErrorCode::TooFewSamples,
                "need at least 16 samples, got " + std::to_string(n_samples));
  }
  // Periodic trapezoid: endpoints coincide, so every node carries weight 1/N.
  const double dt = w.period() / n_samples;
  double acc = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    const double v = sample(w, k * dt);
    acc += v * v;
  }
  return std::sqrt(acc / n_samples);
}

Waveform waveform_linear_combine(double coeff_a, const Waveform& a,
                                 double coeff_b, const Waveform& b) {
  require_same_period(a, b);
  std::vector<int> orders;
  std::vector<std::complex<double>> phasors;
  const auto& ha = a.harmonics();
  const auto& hb = b.harmonics();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ha.size() || j < hb.size()) {
    if (j == hb.size() || (i < ha.size() && ha[i].order < hb[j].order)) {
      orders.push_back(ha[i].order);
      phasors.push_back(coeff_a * ha[i].phasor());
      ++i;
    } else if (i == ha.size() || hb[j].order < ha[i].order) {
      orders.push_back(hb[j].order);
      phasors.push_back(coeff_b * hb[j].phasor());
      ++j;
    } else {
      orders.push_back(ha[i].order);
      phasors.push_back(coeff_a * ha[i].phasor() + coeff_b * hb[j].phasor());
      ++i;
      ++j;
    }
  }
  return Waveform::from_phasors(a.period(), coeff_a * a.dc() + coeff_b * b.dc(),
                                orders, phasors);
}

Waveform scaled(const Waveform& w, double coeff) {
  std::vector<Harmonic> hs = w.harmonics();
  for (auto& h : hs) {
    if (coeff < 0.0) h.phase += std::numbers::pi;
    h.amplitude *= std::abs(coeff);
  }
  return Waveform::from_harmonics(w.period(), coeff * w.dc(), std::move(hs));
}

}  // namespace strandcc
