#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "brainrf/core/types.h"

namespace brainrf {

// Ranking metrics.
//
// Gains are non-negative integers; the gain of a document is 2^g - 1 and the
// discount at 1-based rank r is log2(r + 1). A list whose gains are all zero
// has NDCG 1.0 because no ordering of it can be wrong.

/// DCG@k of gains listed in ranked order.
double dcg_at_k(std::span<const int> gains_in_rank_order, std::size_t k);

/// NDCG@k of gains listed in ranked order; the ideal ordering is the same
/// multiset sorted descending.
double ndcg_at_k(std::span<const int> gains_in_rank_order, std::size_t k);

/// NDCG@k of a ranked list. Throws InputError if a ranked document has no
/// grade or k == 0.
double ndcg_at_k(const RankedList& ranked, const std::unordered_map<std::string, int>& grades,
                 std::size_t k);

/// Average precision of a binary relevance pattern in ranked order; 0 when
/// nothing is relevant.
double average_precision(std::span<const int> relevance_in_rank_order);

/// Average precision over the ranked list with the given relevant set. The
/// denominator is |relevant|, so relevant ids missing from the ranking count
/// as never retrieved. Returns 0 for an empty relevant set.
double mean_average_precision(const RankedList& ranked,
                              const std::unordered_set<std::string>& relevant);

/// Area under the ROC curve: the probability a random positive scores above a
/// random negative, ties counting one half. Throws UndefinedMetricError when
/// only one class is present and InputError on length mismatch.
double auc(std::span<const double> scores, std::span<const int> labels);

/// Cutoffs and MAP switch describing the metric columns of a report.
struct MetricSet {
  std::vector<std::size_t> ndcg_cutoffs{1, 3, 5, 10};
  bool include_map = true;

  std::vector<std::string> names() const;
  std::size_t size() const { return ndcg_cutoffs.size() + (include_map ? 1 : 0); }

  /// Evaluates every metric on gains in ranked order. MAP treats gain > 0 as
  /// relevant unless `map_min_gain` says otherwise.
  std::vector<double> evaluate(std::span<const int> gains_in_rank_order, int map_min_gain = 1) const;
};

}  // namespace brainrf
