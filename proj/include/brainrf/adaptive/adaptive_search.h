#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "brainrf/adaptive/clustering.h"
#include "brainrf/adaptive/synthesis.h"
#include "brainrf/combiner/combiner.h"
#include "brainrf/expansion/query_expansion.h"

namespace brainrf {

/// Ranking metric used to score candidate weights.
struct RankingMetric {
  enum class Kind { Ndcg, AveragePrecision };
  Kind kind = Kind::Ndcg;
  std::size_t k = 10;

  /// Gains in ranked order; average precision counts gain >= 1 as relevant.
  double evaluate(std::span<const int> gains_in_rank_order) const;
  std::string name() const;
  /// Accepts "ndcg@K" or "map". Throws ConfigError otherwise.
  static RankingMetric parse(const std::string& text);
};

/// Seed of one synthesized draw. `stream` separates the click and brain draws.
std::uint64_t synthesis_draw_seed(std::uint64_t seed, const std::string& cluster_key, int draw, int stream);

/// Stream ids for synthesis_draw_seed.
inline constexpr int kClickStream = 0;
inline constexpr int kBrainStream = 1;

struct AdaptiveSearchResult {
  CombinationWeights best;
  double best_score = 0.0;
  std::vector<CombinationWeights> candidates;
  /// Mean synthesized metric per candidate, parallel to `candidates`.
  std::vector<double> scores;
};

/// Exhaustive search over candidate_triples(grid) for one scenario.
///
/// `geometry` holds the documents in presented order; the first `h` are the
/// examined ones and the rest are the unseen ones. `clusters` gives the
/// intent cluster of every document position and `doc_ids` its id. For each
/// cluster a table of n_synth click and brain draws is generated once and
/// shared by every candidate; the candidate's score is the mean metric over
/// all draws, clusters weighted uniformly. Clusters are keyed by their
/// smallest document id, so renumbering clusters leaves the result unchanged.
/// Ties go to the lexicographically smallest triple.
AdaptiveSearchResult adaptive_search(const SessionGeometry& geometry, std::span<const std::string> doc_ids,
                                     std::span<const int> clusters, std::size_t h, int n_clicks,
                                     const SynthesisParams& params, const std::vector<double>& grid,
                                     const RankingMetric& metric, const ExpansionConfig& expansion,
                                     std::uint64_t seed);

/// Query-side inputs of the document-level entry point.
struct AdaptiveQueryContext {
  std::span<const double> query_embedding;
  /// Every document named by the scenario.
  std::span<const Document> documents;
  const SimilarityScorer* scorer = nullptr;
  ExpansionConfig expansion;
};

/// Document-level form of the search: the scenario names the examined and
/// unseen documents, the assignment their clusters.
CombinationWeights adaptive_search(const Scenario& scenario, const ClusterAssignment& assignment,
                                   const SynthesisParams& params, const std::vector<double>& grid,
                                   const RankingMetric& metric, std::uint64_t seed, const AdaptiveQueryContext& ctx);

}  // namespace brainrf
