#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "brainrf/pipeline/dataset.h"

namespace brainrf {

/// Form in which brain responses are emitted.
///   Features: DE feature vectors from a latent class model.
///   Scores:   relevance probabilities directly, skipping the decoder.
///   Raw:      62-channel segments whose band powers carry the same latent model.
enum class EmissionMode { Features, Scores, Raw };

std::string to_string(EmissionMode mode);
EmissionMode parse_emission_mode(const std::string& text);

struct GeneratorConfig {
  int users = 10;
  int sessions = 500;
  int docs_per_query = 30;
  int embedding_dim = 128;

  /// (cluster count, probability) pairs for the intent clusters of a query.
  std::vector<std::pair<int, double>> cluster_counts{{2, 0.55}, {3, 0.30}, {4, 0.15}};
  /// Spread of cluster centres around the query topic and of documents around their centre.
  double cluster_spread = 0.9;
  double doc_spread = 0.35;
  /// How far the query embedding leans towards the intent cluster (0 = topic only).
  double query_intent_bias = 0.0;

  double examined_mean = 10.9;
  double examined_sd = 3.0;

  double p_relevant_in_cluster = 0.8;
  double p_relevant_out_cluster = 0.05;

  /// Mean clicks per session and the share of clicks that are bad clicks.
  double click_mean = 1.9;
  double bad_click_rate = 0.218;
  /// Click probability of an irrelevant document without an attractive snippet.
  double plain_click_prob = 0.02;
  /// Share of sessions in which the user only reads snippets and never clicks.
  /// The other sessions' click probabilities are raised to keep click_mean.
  double browse_only_rate = 0.38;

  /// Grade distributions over grades 1..4.
  std::array<double, 4> snippet_grades_relevant{0.0, 0.2, 0.3, 0.5};
  std::array<double, 4> snippet_grades_irrelevant{0.95, 0.05, 0.0, 0.0};
  std::array<double, 4> landing_grades_relevant{0.0, 0.0, 0.4, 0.6};
  std::array<double, 4> landing_grades_irrelevant{1.0, 0.0, 0.0, 0.0};

  /// Target AUC of a decoder on the emitted brain responses.
  double target_auc = 0.69;
  EmissionMode emission = EmissionMode::Features;

  /// Latent class model of the features.
  int latent_dim = 8;
  /// Angle in degrees between a user's class direction and the shared one.
  double user_specificity_deg = 50.0;
  /// Scale of per-user feature offsets.
  double user_offset = 0.6;
  /// Isotropic feature noise on top of the latent noise.
  double feature_noise = 1.0;
  /// Multiplier on the ideal class separation that compensates for the
  /// decoder's estimation loss. The default is tuned for the default cohort
  /// (10 users, 500 sessions, time-split decoding).
  double separation_gain = 1.35;

  /// Raw emission only.
  double raw_rate_hz = 1000.0;
  double raw_pre_ms = 500.0;
  double raw_post_ms = 2000.0;

  /// Throws ConfigError on invalid probabilities or counts.
  void validate() const;
};

/// Reproducible synthetic cohort; identical for identical (config, seed).
Dataset generate_sessions(const GeneratorConfig& config, std::uint64_t seed);

/// Cohort statistics used to check the generator's calibration.
struct CohortStats {
  double mean_examined = 0.0;
  double mean_clicks = 0.0;
  double bad_click_fraction = 0.0;
  double non_click_session_fraction = 0.0;
  /// Share of examination steps h with no click among the first h records.
  double non_click_step_fraction = 0.0;
  std::size_t sessions = 0;
  std::size_t clicks = 0;
};

CohortStats cohort_stats(const Dataset& dataset);

}  // namespace brainrf
