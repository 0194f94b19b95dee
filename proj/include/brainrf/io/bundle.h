#pragma once

#include <filesystem>
#include <string>

#include "brainrf/pipeline/dataset.h"

namespace brainrf::io {

// A dataset directory holds queries.jsonl, documents.jsonl and
// sessions.jsonl, plus optionally eeg_features.bin with eeg_index.tsv and
// eeg_raw.bin with eeg_raw_index.tsv.

inline constexpr const char* kQueriesFile = "queries.jsonl";
inline constexpr const char* kDocumentsFile = "documents.jsonl";
inline constexpr const char* kSessionsFile = "sessions.jsonl";
inline constexpr const char* kFeaturesFile = "eeg_features.bin";
inline constexpr const char* kFeatureIndexFile = "eeg_index.tsv";
inline constexpr const char* kRawFile = "eeg_raw.bin";
inline constexpr const char* kRawIndexFile = "eeg_raw_index.tsv";

/// Loads and validates a dataset directory. Throws ParseError (with file and
/// line) on malformed records and one IntegrityError listing every
/// cross-reference problem.
Dataset load_bundle(const std::filesystem::path& dir);

/// Writes the dataset in the layout load_bundle reads. Creates the directory.
void save_bundle(const Dataset& dataset, const std::filesystem::path& dir);

/// One-line summary such as "3 queries, 90 documents, 10 sessions".
std::string describe(const Dataset& dataset);

}  // namespace brainrf::io
