#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "brainrf/eeg/decoder.h"
#include "brainrf/eeg/preprocess.h"
#include "brainrf/pipeline/dataset.h"

namespace brainrf {

struct DecodingConfig {
  eeg::DecoderConfig svm;
  /// Own samples a user needs before the personalized decoder takes over.
  std::size_t personalization_threshold = eeg::kPersonalizationThreshold;
  /// Sessions between personalized retrains; 1 retrains before every session.
  std::size_t retrain_every = 1;
  /// Upper bound on the other-user samples the generalized decoder trains on
  /// (a seeded subsample is drawn above it).
  std::size_t generalized_sample_cap = 1500;
  /// Applied to raw segments before feature extraction.
  eeg::PreprocessConfig preprocess;
  /// Worker threads across users; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// Decoded (or ingested) brain scores of one session, parallel to its records.
struct SessionBrainScores {
  std::vector<double> snippet;
  std::vector<std::optional<double>> landing;
  /// Which decoder produced the scores; unset for ingested scores and cold starts.
  std::optional<eeg::DecoderScope> scope;
  /// No decoder was available yet and the uninformative score 0.5 was used.
  bool cold_start = false;
};

struct DecodingSummary {
  std::size_t generalized_sessions = 0;
  std::size_t personalized_sessions = 0;
  std::size_t cold_start_sessions = 0;
  std::size_t ingested_sessions = 0;
  std::size_t personalized_trainings = 0;
};

struct DecodingResult {
  /// Parallel to Dataset::sessions.
  std::vector<SessionBrainScores> sessions;
  DecodingSummary summary;
};

/// Split-by-timepoint decoding. Each user's sessions are visited in time
/// order; the scores of a session come from a decoder trained only on data
/// available before it: the generalized decoder (other users' samples) until
/// the user has accumulated the personalization threshold of own labelled
/// samples, then a personalized decoder trained on those samples. A sample is
/// a snippet response labelled by the binarized snippet grade or a landing
/// response labelled by the binarized landing grade. Ingested scores are used
/// as-is. Deterministic for a fixed seed.
DecodingResult decode_brain_scores(const Dataset& dataset, const DecodingConfig& config, std::uint64_t seed);

/// DE feature vector of a brain input (features as-is, raw segments
/// preprocessed and extracted). Empty when the input only has a score.
std::optional<std::vector<double>> resolve_features(const BrainInput& input, const eeg::PreprocessConfig& config);

struct DecodingQuality {
  std::optional<double> snippet_auc;
  std::optional<double> landing_auc;
  std::optional<double> overall_auc;
  std::size_t snippet_samples = 0;
  std::size_t landing_samples = 0;
};

/// AUC of the scores against binarized grades, excluding cold-start sessions.
DecodingQuality evaluate_decoding(const Dataset& dataset, const DecodingResult& result);

}  // namespace brainrf
