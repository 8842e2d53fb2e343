#pragma once

#include <complex>
#include <span>
#include <vector>

namespace strandcc {

/// One cosine component: amplitude * cos(2*pi*order*t/period + phase).
struct Harmonic {
  int order = 1;
  double amplitude = 0.0;  // peak amperes
  double phase = 0.0;      // radians

  /// Peak phasor amplitude * exp(j*phase).
  std::complex<double> phasor() const { return std::polar(amplitude, phase); }
};

/// Periodic real signal stored as a finite Fourier series: a DC term plus
/// integer-order cosine harmonics of a common period. Immutable once built.
class Waveform {
 public:
  /// Validates and canonicalizes: harmonics are sorted by order.
  /// Throws NonPositivePeriod, InvalidHarmonicOrder, NegativeAmplitude or
  /// DuplicateHarmonicOrder.
  static Waveform from_harmonics(double period, double dc,
                                 std::vector<Harmonic> harmonics);

  /// Builds a waveform from per-order peak phasors; negative or complex
  /// coefficients are folded into amplitude/phase.
  static Waveform from_phasors(double period, double dc,
                               std::span<const int> orders,
                               std::span<const std::complex<double>> phasors);

  static Waveform zero(double period);

  double period() const noexcept { return period_; }
  double dc() const noexcept { return dc_; }
  const std::vector<Harmonic>& harmonics() const noexcept { return harmonics_; }
  double fundamental_frequency() const noexcept { return 1.0 / period_; }

  /// Phasor of the given order, zero when the order is absent.
  std::complex<double> phasor_of(int order) const;

 private:
  Waveform(double period, double dc, std::vector<Harmonic> harmonics)
      : period_(period), dc_(dc), harmonics_(std::move(harmonics)) {}

  double period_;
  double dc_;
  std::vector<Harmonic> harmonics_;
};

/// Value at time t; t is reduced modulo the period first.
double sample(const Waveform& w, double t);

/// Time derivative at t.
double sample_derivative(const Waveform& w, double t);

/// Exact RMS of the series: sqrt(dc^2 + sum amplitude^2 / 2).
double rms_parseval(const Waveform& w);

/// Equal-weight periodic trapezoidal quadrature of the mean-square over one
/// period. Throws TooFewSamples below 16 samples.
double rms_integrate(const Waveform& w, int n_samples);

/// coeff_a * a + coeff_b * b, combined harmonic by harmonic.
/// Throws PeriodMismatch when the periods differ.
Waveform waveform_linear_combine(double coeff_a, const Waveform& a,
                                 double coeff_b, const Waveform& b);

Waveform scaled(const Waveform& w, double coeff);

}  // namespace strandcc
