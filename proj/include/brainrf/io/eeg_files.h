#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "brainrf/eeg/segment.h"

namespace brainrf::io {

// eeg_features.bin: 8-byte magic "BRFEAT01", uint64 rows, uint64 cols, then
// rows * cols little-endian float32 values in row-major order.
//
// eeg_raw.bin: 8-byte magic "BRRAW001", uint64 count, then per segment
// uint32 channels, uint32 samples, float64 rate_hz, float64 pre_ms and
// channels * samples float32 values, channel-major.
//
// Index files are TSV with header "session\tposition\tkind\trow"; kind is
// "snippet" or "landing", position is the 0-based record index in the session.

struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> values;
};

struct EegIndexEntry {
  std::string session;
  std::size_t position = 0;
  std::string kind;
  std::size_t row = 0;
};

void write_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& m);
/// Throws ParseError on a bad header or truncated data.
FeatureMatrix read_feature_matrix(const std::filesystem::path& path);

void write_segments(const std::filesystem::path& path, const std::vector<std::shared_ptr<const eeg::EegSegment>>& segs);
std::vector<std::shared_ptr<const eeg::EegSegment>> read_segments(const std::filesystem::path& path);

void write_eeg_index(const std::filesystem::path& path, const std::vector<EegIndexEntry>& entries);
/// Throws ParseError naming the line of a malformed entry.
std::vector<EegIndexEntry> read_eeg_index(const std::filesystem::path& path);

}  // namespace brainrf::io
