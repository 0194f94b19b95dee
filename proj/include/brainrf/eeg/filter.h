#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace brainrf::eeg {

/// One second-order section, a0 normalized to 1:
///   H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

/// Cascade of second-order sections.
class SosFilter {
 public:
  SosFilter() = default;
  explicit SosFilter(std::vector<Biquad> sections) : sections_(std::move(sections)) {}

  const std::vector<Biquad>& sections() const noexcept { return sections_; }
  bool empty() const noexcept { return sections_.empty(); }

  /// Appends the sections of `other` (series connection).
  void cascade(const SosFilter& other);

  /// Causal filtering from zero initial state.
  std::vector<double> apply(std::span<const double> x) const;

  /// Forward-backward filtering with odd-extension padding and steady-state
  /// initial conditions. Zero phase; magnitude response is |H|^2.
  std::vector<double> apply_zero_phase(std::span<const double> x) const;

  /// |H(e^{j 2 pi f / fs})|.
  double magnitude(double freq_hz, double sample_rate_hz) const;

 private:
  std::vector<Biquad> sections_;
};

// Butterworth designs via bilinear transform with frequency pre-warping.
// `order` is the analog prototype order; a band-pass of order N has 2N poles.

SosFilter butterworth_lowpass(int order, double cutoff_hz, double sample_rate_hz);
SosFilter butterworth_highpass(int order, double cutoff_hz, double sample_rate_hz);
SosFilter butterworth_bandpass(int order, double low_hz, double high_hz, double sample_rate_hz);

/// Noise-equivalent bandwidth in Hz of the zero-phase response |H|^4 (peak
/// normalized to one), integrated numerically over [0, fs/2].
double zero_phase_noise_bandwidth(const SosFilter& filter, double sample_rate_hz);

}  // namespace brainrf::eeg
