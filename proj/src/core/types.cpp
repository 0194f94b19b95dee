#include "brainrf/core/types.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "brainrf/core/error.h"

namespace brainrf {

std::string_view to_string(RfMode mode) {
  return mode == RfMode::Iterative ? "irf" : "rrf";
}

RfMode parse_rf_mode(std::string_view text) {
  if (text == "irf" || text == "IRF") return RfMode::Iterative;
  if (text == "rrf" || text == "RRF") return RfMode::Retrospective;
  throw InputError("unknown feedback mode '" + std::string(text) + "' (expected irf or rrf)");
}

RelevanceGrade::RelevanceGrade(int value) : value_(value) {
  if (value < 1 || value > 4) {
    throw InputError("relevance grade must be in [1,4], got " + std::to_string(value));
  }
}

void validate_embedding(const Document& doc) {
  if (doc.embedding.empty()) {
    throw InputError("document '" + doc.id + "' has no embedding");
  }
  double sq = 0.0;
  for (double x : doc.embedding) {
    if (!std::isfinite(x)) throw InputError("document '" + doc.id + "' has a non-finite embedding");
    sq += x * x;
  }
  if (std::abs(std::sqrt(sq) - 1.0) > kUnitNormTolerance) {
    throw InputError("document '" + doc.id + "' embedding is not unit norm (|e| = " +
                     std::to_string(std::sqrt(sq)) + ")");
  }
}

void normalize_in_place(std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (!(sq > 0.0)) throw InputError("cannot normalize a zero vector");
  const double inv = 1.0 / std::sqrt(sq);
  for (double& x : v) x *= inv;
}

void ScoreVector::push(std::string doc_id, double score) {
  entries_.push_back({std::move(doc_id), score, false});
}

void ScoreVector::push_masked(std::string doc_id) {
  entries_.push_back({std::move(doc_id), 0.0, true});
}

std::vector<std::string> ScoreVector::ids() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.doc_id);
  return out;
}

std::vector<double> ScoreVector::unmasked_scores() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) {
    if (e.masked) throw InputError("score for '" + e.doc_id + "' is masked");
    out.push_back(e.score);
  }
  return out;
}

bool ScoreVector::any_masked() const {
  return std::any_of(entries_.begin(), entries_.end(), [](const ScoreEntry& e) { return e.masked; });
}

void ScoreVector::validate_unique_ids() const {
  std::unordered_set<std::string_view> seen;
  for (const auto& e : entries_) {
    if (!seen.insert(e.doc_id).second) throw InputError("duplicate document id '" + e.doc_id + "'");
  }
}

void ScoreVector::validate_unit_range() const {
  validate_unique_ids();
  for (const auto& e : entries_) {
    if (e.masked) continue;
    if (!(e.score >= 0.0 && e.score <= 1.0)) {
      throw InputError("score for '" + e.doc_id + "' outside [0,1]: " + std::to_string(e.score));
    }
  }
}

std::vector<std::size_t> stable_descending_order(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

RankedList RankedList::from_scores(const ScoreVector& scores) {
  const std::vector<double> values = scores.unmasked_scores();
  RankedList list;
  list.entries_.reserve(values.size());
  for (std::size_t i : stable_descending_order(values)) {
    list.entries_.push_back({scores[i].doc_id, values[i]});
  }
  return list;
}

RankedList RankedList::from_ordered(std::vector<RankedEntry> entries) {
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].score > entries[i - 1].score) {
      throw InputError("ranked list scores must be non-increasing");
    }
  }
  RankedList list;
  list.entries_ = std::move(entries);
  return list;
}

std::vector<std::string> RankedList::ids() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.doc_id);
  return out;
}

}  // namespace brainrf
