#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "brainrf/adaptive/adaptive_search.h"
#include "brainrf/combiner/combiner.h"
#include "brainrf/core/metrics.h"
#include "brainrf/expansion/query_expansion.h"
#include "brainrf/pipeline/dataset.h"
#include "brainrf/pipeline/decoding.h"

namespace brainrf {

/// How a method picks its weights for a row.
///   Baseline: rank by the pseudo channel alone, no feedback.
///   Fixed:    the method's weights everywhere.
///   Scenario: brain-heavy weights when clicks are absent (iterative) or a
///             bad click occurred (retrospective), the method's weights otherwise.
///   Adaptive: exhaustive synthesized search per row (iterative only).
enum class MethodKind { Baseline, Fixed, Scenario, Adaptive };

std::string to_string(MethodKind kind);
MethodKind parse_method_kind(const std::string& text);

struct MethodSpec {
  std::string name;
  MethodKind kind = MethodKind::Fixed;
  CombinationWeights weights{0.6, 0.2, 0.2};
};

struct AdaptiveConfig {
  SynthesisParams synthesis;
  /// Replace `synthesis` by estimates from the decoded cohort before running.
  bool estimate_synthesis = false;
  std::vector<double> grid = default_weight_grid();
  RankingMetric metric;
  /// Cluster count for queries whose documents carry no cluster labels.
  int cluster_count = 3;
};

struct HarnessConfig {
  std::vector<MethodSpec> irf_methods{{"baseline", MethodKind::Baseline, {0.0, 0.0, 1.0}},
                                      {"fixed", MethodKind::Fixed, {0.6, 0.2, 0.2}}};
  std::vector<MethodSpec> rrf_methods{{"baseline", MethodKind::Baseline, {0.0, 0.0, 1.0}},
                                      {"fixed", MethodKind::Fixed, {1.0, 0.4, 0.0}}};
  ExpansionConfig expansion;
  MetricSet metrics;
  DecodingConfig decoding;
  AdaptiveConfig adaptive;
  /// Worker threads across sessions; 0 picks the hardware concurrency.
  unsigned threads = 0;

  /// Throws ConfigError on any invalid component.
  void validate() const;
};

struct ReportRow {
  RfMode mode = RfMode::Iterative;
  std::string user_id;
  std::string session_id;
  std::string query_id;
  std::size_t h = 0;
  int n_clicks = 0;
  int n_bad_clicks = 0;
  std::string method;
  CombinationWeights weights;
  std::vector<double> metrics;
};

struct MethodAggregate {
  RfMode mode = RfMode::Iterative;
  std::string method;
  std::size_t rows = 0;
  std::vector<double> means;
};

struct ExperimentReport {
  std::vector<std::string> metric_names;
  std::vector<ReportRow> rows;
  std::vector<MethodAggregate> aggregates;
  std::uint64_t seed = 0;
  /// Resolved configuration that produced the report, as JSON text.
  std::string config_json;
  /// FNV-1a digest of the seed and config_json, as 16 hex digits.
  std::string fingerprint;
  std::size_t skipped_empty_unseen = 0;
  std::size_t skipped_missing_labels = 0;
  DecodingSummary decoding;
  std::vector<std::string> warnings;

  /// Recomputes aggregates (per mode and method, in first-appearance order) and the fingerprint.
  void finalize();
  /// Values of one metric for one method, in row order.
  std::vector<double> column(RfMode mode, const std::string& method, std::size_t metric) const;
  /// Rows of one method, in row order.
  std::vector<const ReportRow*> rows_of(RfMode mode, const std::string& method) const;
  std::size_t metric_index(const std::string& name) const;
};

std::string fingerprint_of(std::uint64_t seed, const std::string& config_json);

/// Iterative feedback over every session and every h in 1..h_max. Rows with
/// no unseen documents, or with an unseen document lacking an external label,
/// are skipped and counted. Ground truth is the external binary label.
ExperimentReport run_irf(const Dataset& dataset, const HarnessConfig& config, std::uint64_t seed);
ExperimentReport run_irf(const Dataset& dataset, const DecodingResult& decoded, const HarnessConfig& config,
                         std::uint64_t seed);

/// Retrospective feedback once per session over its examined documents.
/// Ground truth is the landing grade of clicked documents and the snippet
/// grade of the others, as gain grade - 1.
ExperimentReport run_rrf(const Dataset& dataset, const HarnessConfig& config, std::uint64_t seed);
ExperimentReport run_rrf(const Dataset& dataset, const DecodingResult& decoded, const HarnessConfig& config,
                         std::uint64_t seed);

/// Iterative feedback comparing the configured fixed weights with the
/// adaptive search. Methods without an Adaptive entry get one appended.
ExperimentReport run_adaptive_irf(const Dataset& dataset, const HarnessConfig& config, std::uint64_t seed);
ExperimentReport run_adaptive_irf(const Dataset& dataset, const DecodingResult& decoded, const HarnessConfig& config,
                                  std::uint64_t seed);

/// Synthesis parameters estimated from decoded snippet scores and clicks,
/// with relevance taken from the binarized snippet grade.
SynthesisParams estimate_synthesis_from(const Dataset& dataset, const DecodingResult& decoded, int n_synth);

}  // namespace brainrf
