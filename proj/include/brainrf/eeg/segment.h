#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace brainrf::eeg {

inline constexpr std::size_t kChannelCount = 62;

/// Stimulus-locked EEG epoch: channels x time samples in microvolts. The first
/// `pre_stimulus_ms` of every channel precede stimulus onset.
class EegSegment {
 public:
  EegSegment() = default;
  EegSegment(std::size_t channels, std::size_t samples, double sampling_rate_hz,
             double pre_stimulus_ms = 500.0);

  std::size_t channels() const noexcept { return channels_; }
  std::size_t samples() const noexcept { return samples_; }
  double sampling_rate_hz() const noexcept { return sampling_rate_hz_; }
  double pre_stimulus_ms() const noexcept { return pre_stimulus_ms_; }
  double duration_ms() const noexcept { return 1000.0 * static_cast<double>(samples_) / sampling_rate_hz_; }
  /// Number of samples in the pre-stimulus prefix.
  std::size_t pre_stimulus_samples() const;

  std::span<double> channel(std::size_t c) { return {data_.data() + c * samples_, samples_}; }
  std::span<const double> channel(std::size_t c) const { return {data_.data() + c * samples_, samples_}; }

  double& at(std::size_t c, std::size_t t) { return data_[c * samples_ + t]; }
  double at(std::size_t c, std::size_t t) const { return data_[c * samples_ + t]; }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

 private:
  std::size_t channels_ = 0;
  std::size_t samples_ = 0;
  double sampling_rate_hz_ = 0.0;
  double pre_stimulus_ms_ = 0.0;
  std::vector<double> data_;
};

}  // namespace brainrf::eeg
