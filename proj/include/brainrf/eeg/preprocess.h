#pragma once

#include "brainrf/eeg/segment.h"

namespace brainrf::eeg {

struct PreprocessConfig {
  double post_ms = 2000.0;
  double target_rate_hz = 500.0;
  double highpass_hz = 0.5;
  double lowpass_hz = 50.0;
  int highpass_order = 4;
  int lowpass_order = 8;
};

/// Baseline-corrects each channel by the mean of its pre-stimulus prefix,
/// band-limits it with zero-phase Butterworth high-/low-pass filters,
/// resamples to the target rate and keeps the first `post_ms` after onset.
/// The result has no pre-stimulus prefix.
///
/// Throws InputError when the segment is shorter than prefix + post window,
/// when the target rate exceeds the raw rate, or when the channel count is
/// not kChannelCount.
EegSegment preprocess(const EegSegment& raw, const PreprocessConfig& config = {});

/// Same as above with defaults for everything but the window and target rate.
EegSegment preprocess(const EegSegment& raw, double post_ms, double target_rate_hz);

}  // namespace brainrf::eeg
