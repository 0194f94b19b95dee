#include "brainrf/eeg/preprocess.h"

#include <cmath>
#include <numeric>
#include <string>

#include "brainrf/core/error.h"
#include "brainrf/eeg/filter.h"

namespace brainrf::eeg {

EegSegment::EegSegment(std::size_t channels, std::size_t samples, double sampling_rate_hz,
                       double pre_stimulus_ms)
    : channels_(channels),
      samples_(samples),
      sampling_rate_hz_(sampling_rate_hz),
      pre_stimulus_ms_(pre_stimulus_ms),
      data_(channels * samples, 0.0) {
  if (!(sampling_rate_hz > 0.0)) throw InputError("EEG sampling rate must be positive");
  if (pre_stimulus_ms < 0.0) throw InputError("pre-stimulus duration must be >= 0");
}

std::size_t EegSegment::pre_stimulus_samples() const {
  return static_cast<std::size_t>(std::llround(pre_stimulus_ms_ * sampling_rate_hz_ / 1000.0));
}

namespace {

// Picks every step-th sample for integer ratios, otherwise interpolates linearly.
std::vector<double> resample_window(std::span<const double> x, double from_hz, double to_hz,
                                    std::size_t start, std::size_t count) {
  std::vector<double> out(count);
  const double ratio = from_hz / to_hz;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) < 1e-9) {
    const auto step = static_cast<std::size_t>(rounded);
    for (std::size_t i = 0; i < count; ++i) out[i] = x[start + i * step];
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    const double pos = static_cast<double>(start) + static_cast<double>(i) * ratio;
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    const std::size_t hi = std::min(lo + 1, x.size() - 1);
    out[i] = x[lo] + frac * (x[hi] - x[lo]);
  }
  return out;
}

}  // namespace

EegSegment preprocess(const EegSegment& raw, const PreprocessConfig& config) {
  if (raw.channels() != kChannelCount) {
    throw InputError("EEG segment must have " + std::to_string(kChannelCount) + " channels, got " +
                     std::to_string(raw.channels()));
  }
  if (!(config.post_ms > 0.0)) throw InputError("post-stimulus window must be positive");
  if (!(config.target_rate_hz > 0.0) || config.target_rate_hz > raw.sampling_rate_hz()) {
    throw InputError("target rate must be positive and not exceed the raw rate");
  }
  if (raw.duration_ms() + 1e-9 < raw.pre_stimulus_ms() + config.post_ms) {
    throw InputError("EEG segment of " + std::to_string(raw.duration_ms()) +
                     " ms is shorter than the requested pre-stimulus + post-stimulus window");
  }

  const double fs = raw.sampling_rate_hz();
  SosFilter band = butterworth_highpass(config.highpass_order, config.highpass_hz, fs);
  if (config.lowpass_hz < fs / 2.0) {
    band.cascade(butterworth_lowpass(config.lowpass_order, config.lowpass_hz, fs));
  }

  const std::size_t pre = raw.pre_stimulus_samples();
  const auto out_samples =
      static_cast<std::size_t>(std::llround(config.post_ms * config.target_rate_hz / 1000.0));
  const double ratio = fs / config.target_rate_hz;
  if (out_samples == 0 ||
      static_cast<double>(pre) + static_cast<double>(out_samples - 1) * ratio >
          static_cast<double>(raw.samples() - 1) + 1e-9) {
    throw InputError("EEG segment too short for the resampled post-stimulus window");
  }

  EegSegment out(raw.channels(), out_samples, config.target_rate_hz, 0.0);
  std::vector<double> buf;
  for (std::size_t c = 0; c < raw.channels(); ++c) {
    const auto ch = raw.channel(c);
    buf.assign(ch.begin(), ch.end());
    if (pre > 0) {
      const double baseline = std::accumulate(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(pre), 0.0) /
                              static_cast<double>(pre);
      for (double& v : buf) v -= baseline;
    }
    const std::vector<double> filtered = band.apply_zero_phase(buf);
    const std::vector<double> window = resample_window(filtered, fs, config.target_rate_hz, pre, out_samples);
    std::copy(window.begin(), window.end(), out.channel(c).begin());
  }
  return out;
}

EegSegment preprocess(const EegSegment& raw, double post_ms, double target_rate_hz) {
  PreprocessConfig config;
  config.post_ms = post_ms;
  config.target_rate_hz = target_rate_hz;
  return preprocess(raw, config);
}

}  // namespace brainrf::eeg
