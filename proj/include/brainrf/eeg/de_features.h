#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "brainrf/eeg/filter.h"
#include "brainrf/eeg/segment.h"

namespace brainrf::eeg {

struct FrequencyBand {
  double low_hz;
  double high_hz;
};

inline constexpr std::size_t kBandCount = 5;
/// delta, theta, alpha, beta, gamma
inline constexpr std::array<FrequencyBand, kBandCount> kBands{{
    {0.5, 4.0}, {4.0, 8.0}, {8.0, 13.0}, {13.0, 30.0}, {30.0, 50.0}}};

inline constexpr std::size_t kFeatureLength = kChannelCount * kBandCount;
inline constexpr double kVarianceFloor = 1e-12;
inline constexpr double kMinDeSampleRate = 100.0;

/// Differential entropy features, channels x bands, stored channel-major
/// (index = channel * kBandCount + band). Units are ln(power).
class DeFeatureVector {
 public:
  DeFeatureVector() : values_(kFeatureLength, 0.0) {}
  explicit DeFeatureVector(std::vector<double> flat);

  double at(std::size_t channel, std::size_t band) const { return values_[channel * kBandCount + band]; }
  double& at(std::size_t channel, std::size_t band) { return values_[channel * kBandCount + band]; }

  const std::vector<double>& flat() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// 0.5 * ln(2 pi e * var(x)), with the variance floored at kVarianceFloor.
double differential_entropy(std::span<const double> x);

/// Gaussian differential entropy of a given variance (floored).
double gaussian_entropy(double variance);

/// Per-band DE extraction for one sampling rate. Each band uses a 4th-order
/// Butterworth band-pass applied forward-backward; the band variance is
/// rescaled by nominal bandwidth / noise-equivalent bandwidth of that zero-phase
/// response, so white noise of variance s2 reports s2 * bandwidth / Nyquist.
/// Bands whose upper edge reaches Nyquist fall back to a high-pass.
class DeExtractor {
 public:
  explicit DeExtractor(double sampling_rate_hz, int band_order = 4);

  double sampling_rate_hz() const noexcept { return sampling_rate_hz_; }

  /// Normalized band variance of a single channel.
  double band_variance(std::span<const double> x, std::size_t band) const;

  /// Throws InputError when the channel count is wrong, the rate differs from
  /// this extractor's, or a channel is empty.
  DeFeatureVector extract(const EegSegment& segment) const;

 private:
  double sampling_rate_hz_;
  std::array<SosFilter, kBandCount> filters_;
  std::array<double, kBandCount> variance_scale_{};
};

/// Convenience wrapper building a DeExtractor for the segment's rate.
/// Requires a rate of at least kMinDeSampleRate.
DeFeatureVector extract_de(const EegSegment& segment);

}  // namespace brainrf::eeg
