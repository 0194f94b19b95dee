#include "brainrf/core/metrics.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "brainrf/core/error.h"

namespace brainrf {

namespace {

double gain_value(int g) {
  if (g < 0) throw InputError("relevance gain must be >= 0, got " + std::to_string(g));
  return std::exp2(static_cast<double>(g)) - 1.0;
}

}  // namespace

double dcg_at_k(std::span<const int> gains, std::size_t k) {
  const std::size_t n = std::min(k, gains.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dcg += gain_value(gains[i]) / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg;
}

double ndcg_at_k(std::span<const int> gains, std::size_t k) {
  if (k == 0) throw InputError("NDCG cutoff must be >= 1");
  std::vector<int> ideal(gains.begin(), gains.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg_at_k(ideal, k);
  if (idcg == 0.0) {
    // Also rejects negative gains hidden past the cutoff.
    for (int g : gains) gain_value(g);
    return 1.0;
  }
  return dcg_at_k(gains, k) / idcg;
}

double ndcg_at_k(const RankedList& ranked, const std::unordered_map<std::string, int>& grades,
                 std::size_t k) {
  std::vector<int> gains;
  gains.reserve(ranked.size());
  for (const auto& e : ranked.entries()) {
    auto it = grades.find(e.doc_id);
    if (it == grades.end()) throw InputError("no grade for ranked document '" + e.doc_id + "'");
    gains.push_back(it->second);
  }
  return ndcg_at_k(gains, k);
}

double average_precision(std::span<const int> relevance) {
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < relevance.size(); ++i) {
    if (relevance[i] != 0) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

double mean_average_precision(const RankedList& ranked,
                              const std::unordered_set<std::string>& relevant) {
  if (relevant.empty()) return 0.0;
  std::size_t hits = 0;
  double sum = 0.0;
  const auto& entries = ranked.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (relevant.contains(entries[i].doc_id)) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(relevant.size());
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw InputError("auc: scores and labels differ in length");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Mann-Whitney U with midranks for ties; accumulate twice the rank sum to stay integral.
  double positives = 0.0;
  double twice_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double twice_mid_rank = static_cast<double>(i + 1 + j + 1);
    for (std::size_t t = i; t <= j; ++t) {
      if (labels[order[t]] != 0) {
        positives += 1.0;
        twice_rank_sum += twice_mid_rank;
      }
    }
    i = j + 1;
  }
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    throw UndefinedMetricError("auc needs at least one positive and one negative label");
  }
  const double twice_u = twice_rank_sum - positives * (positives + 1.0);
  return twice_u / (2.0 * positives * negatives);
}

std::vector<std::string> MetricSet::names() const {
  std::vector<std::string> out;
  for (std::size_t k : ndcg_cutoffs) out.push_back("ndcg@" + std::to_string(k));
  if (include_map) out.emplace_back("map");
  return out;
}

std::vector<double> MetricSet::evaluate(std::span<const int> gains, int map_min_gain) const {
  std::vector<double> out;
  out.reserve(size());
  for (std::size_t k : ndcg_cutoffs) out.push_back(ndcg_at_k(gains, k));
  if (include_map) {
    std::vector<int> rel(gains.size());
    for (std::size_t i = 0; i < gains.size(); ++i) rel[i] = gains[i] >= map_min_gain ? 1 : 0;
    out.push_back(average_precision(rel));
  }
  return out;
}

}  // namespace brainrf
