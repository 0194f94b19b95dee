#include "brainrf/eeg/de_features.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "brainrf/core/error.h"

namespace brainrf::eeg {

DeFeatureVector::DeFeatureVector(std::vector<double> flat) : values_(std::move(flat)) {
  if (values_.size() != kFeatureLength) {
    throw InputError("DE feature vector must have " + std::to_string(kFeatureLength) +
                     " values, got " + std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InputError("DE feature vector contains a non-finite value");
  }
}

double gaussian_entropy(double variance) {
  const double v = std::max(variance, kVarianceFloor);
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * v);
}

namespace {

double variance(std::span<const double> x) {
  if (x.empty()) throw InputError("cannot take the variance of an empty signal");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(x.size());
}

}  // namespace

double differential_entropy(std::span<const double> x) {
  return gaussian_entropy(variance(x));
}

DeExtractor::DeExtractor(double sampling_rate_hz, int band_order) : sampling_rate_hz_(sampling_rate_hz) {
  if (!(sampling_rate_hz >= kMinDeSampleRate)) {
    throw InputError("DE extraction needs a sampling rate of at least 100 Hz, got " +
                     std::to_string(sampling_rate_hz));
  }
  const double nyquist = sampling_rate_hz / 2.0;
  for (std::size_t b = 0; b < kBandCount; ++b) {
    const FrequencyBand band = kBands[b];
    double nominal = band.high_hz - band.low_hz;
    if (band.high_hz >= 0.98 * nyquist) {
      filters_[b] = butterworth_highpass(band_order, band.low_hz, sampling_rate_hz);
      nominal = nyquist - band.low_hz;
    } else {
      filters_[b] = butterworth_bandpass(band_order, band.low_hz, band.high_hz, sampling_rate_hz);
    }
    variance_scale_[b] = nominal / zero_phase_noise_bandwidth(filters_[b], sampling_rate_hz);
  }
}

double DeExtractor::band_variance(std::span<const double> x, std::size_t band) const {
  const std::vector<double> filtered = filters_.at(band).apply_zero_phase(x);
  return variance(filtered) * variance_scale_[band];
}

DeFeatureVector DeExtractor::extract(const EegSegment& segment) const {
  if (segment.channels() != kChannelCount) {
    throw InputError("EEG segment must have " + std::to_string(kChannelCount) + " channels, got " +
                     std::to_string(segment.channels()));
  }
  if (std::abs(segment.sampling_rate_hz() - sampling_rate_hz_) > 1e-9) {
    throw InputError("segment sampling rate does not match the extractor");
  }
  if (segment.samples() == 0) throw InputError("EEG segment has no samples");
  DeFeatureVector out;
  for (std::size_t c = 0; c < segment.channels(); ++c) {
    const auto ch = segment.channel(c);
    for (std::size_t b = 0; b < kBandCount; ++b) out.at(c, b) = gaussian_entropy(band_variance(ch, b));
  }
  return out;
}

DeFeatureVector extract_de(const EegSegment& segment) {
  return DeExtractor(segment.sampling_rate_hz()).extract(segment);
}

}  // namespace brainrf::eeg
