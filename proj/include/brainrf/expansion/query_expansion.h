#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "brainrf/core/types.h"
#include "brainrf/signals/similarity.h"

namespace brainrf {

struct ExpansionConfig {
  /// Maximum number of feedback documents.
  std::size_t k = 10;
  /// Share of the feedback score in the final score; the rest is the query score.
  double c = 0.1;

  /// Throws ConfigError unless k >= 1 and 0 <= c <= 1.
  void validate() const;
};

/// Positions of the min(k, n) highest scores, best first; ties keep the
/// earlier position first.
std::vector<std::size_t> select_feedback(std::span<const double> combined, std::size_t k);

/// Ids of the selected feedback documents. Throws InputError on an empty vector.
std::vector<std::string> select_feedback(const ScoreVector& combined, std::size_t k);

/// exp(s_j) / sum_l exp(s_l), computed after subtracting the maximum.
std::vector<double> softmax_weights(std::span<const double> scores);

struct ExpansionOutcome {
  ScoreVector scores;
  /// True when there was no feedback and the scores are query scores only.
  bool fell_back_to_pseudo = false;
};

/// Scores every unseen document as
///   c * sum_j w_j * sim(feedback_j, unseen) + (1 - c) * sim(query, unseen).
/// An ingested pseudo_score on an unseen document replaces sim(query, unseen).
/// Empty feedback yields the query score alone (weighted by 1, not 1 - c).
ExpansionOutcome expand_and_score(std::span<const double> query_embedding, std::span<const Document> feedback,
                                  std::span<const double> feedback_weights, std::span<const Document> unseen,
                                  const SimilarityScorer& scorer, const ExpansionConfig& config);

/// Selection, weighting and expansion in one step. `examined` and `combined`
/// are parallel, in examination order.
ExpansionOutcome rerank_unseen(std::span<const double> query_embedding, std::span<const Document> examined,
                               const ScoreVector& combined, std::span<const Document> unseen,
                               const SimilarityScorer& scorer, const ExpansionConfig& config);

/// Precomputed similarities for one session: the query score of every
/// document and the similarity of every examined document to every document.
/// Documents are in presented order; the first `examined` were examined.
class SessionGeometry {
 public:
  SessionGeometry(std::span<const double> query_embedding, std::span<const Document> docs, std::size_t examined,
                  const SimilarityScorer& scorer);

  std::size_t doc_count() const noexcept { return n_; }
  std::size_t examined_count() const noexcept { return examined_; }
  const std::vector<double>& pseudo() const noexcept { return pseudo_; }
  double similarity(std::size_t examined_pos, std::size_t doc_pos) const { return sim_[examined_pos * n_ + doc_pos]; }

  /// Expansion scores of documents h..n-1 given combined scores of documents
  /// 0..h-1. Returns false (and query scores) when h == 0.
  bool expansion_scores(std::size_t h, std::span<const double> combined, const ExpansionConfig& config,
                        std::vector<double>& out) const;

 private:
  std::size_t n_ = 0;
  std::size_t examined_ = 0;
  std::vector<double> pseudo_;
  std::vector<double> sim_;
};

}  // namespace brainrf
