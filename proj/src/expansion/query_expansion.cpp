#include "brainrf/expansion/query_expansion.h"

#include <algorithm>
#include <cmath>

#include "brainrf/core/error.h"

namespace brainrf {

void ExpansionConfig::validate() const {
  if (k < 1) throw ConfigError("expansion k must be at least 1");
  if (!(c >= 0.0 && c <= 1.0)) throw ConfigError("expansion c must lie in [0,1]");
}

std::vector<std::size_t> select_feedback(std::span<const double> combined, std::size_t k) {
  std::vector<std::size_t> order(combined.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return combined[a] > combined[b]; });
  order.resize(std::min(k, order.size()));
  return order;
}

std::vector<std::string> select_feedback(const ScoreVector& combined, std::size_t k) {
  if (combined.empty()) throw InputError("select_feedback: no combined scores");
  const std::vector<double> s = combined.unmasked_scores();
  std::vector<std::string> out;
  for (std::size_t i : select_feedback(s, k)) out.push_back(combined[i].doc_id);
  return out;
}

std::vector<double> softmax_weights(std::span<const double> scores) {
  if (scores.empty()) throw InputError("softmax of an empty list");
  const double mx = *std::max_element(scores.begin(), scores.end());
  if (!std::isfinite(mx)) throw InputError("softmax input is not finite");
  std::vector<double> w(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw InputError("softmax input is not finite");
    w[i] = std::exp(scores[i] - mx);
    total += w[i];
  }
  for (double& v : w) v /= total;
  return w;
}

namespace {

double query_score(std::span<const double> query, const Document& d, const SimilarityScorer& scorer) {
  if (d.pseudo_score) return *d.pseudo_score;
  if (d.embedding.empty()) throw InputError("document '" + d.id + "' has no representation");
  return scorer.score(query, d.embedding);
}

}  // namespace

ExpansionOutcome expand_and_score(std::span<const double> query_embedding, std::span<const Document> feedback,
                                  std::span<const double> feedback_weights, std::span<const Document> unseen,
                                  const SimilarityScorer& scorer, const ExpansionConfig& config) {
  config.validate();
  if (feedback.size() != feedback_weights.size()) {
    throw InputError("expansion: feedback documents and weights differ in length");
  }
  ExpansionOutcome out;
  out.fell_back_to_pseudo = feedback.empty();
  for (const Document& u : unseen) {
    const double q = query_score(query_embedding, u, scorer);
    if (feedback.empty()) {
      out.scores.push(u.id, q);
      continue;
    }
    double rf = 0.0;
    for (std::size_t j = 0; j < feedback.size(); ++j) rf += feedback_weights[j] * scorer.score(feedback[j].embedding, u.embedding);
    out.scores.push(u.id, config.c * rf + (1.0 - config.c) * q);
  }
  return out;
}

ExpansionOutcome rerank_unseen(std::span<const double> query_embedding, std::span<const Document> examined,
                               const ScoreVector& combined, std::span<const Document> unseen,
                               const SimilarityScorer& scorer, const ExpansionConfig& config) {
  if (examined.size() != combined.size()) throw InputError("rerank: examined documents and scores differ in length");
  std::vector<Document> fb;
  std::vector<double> sel_scores;
  if (!combined.empty()) {
    const std::vector<double> s = combined.unmasked_scores();
    for (std::size_t i : select_feedback(s, config.k)) {
      if (examined[i].id != combined[i].doc_id) throw InputError("rerank: document order mismatch");
      fb.push_back(examined[i]);
      sel_scores.push_back(s[i]);
    }
  }
  const std::vector<double> w = sel_scores.empty() ? std::vector<double>{} : softmax_weights(sel_scores);
  return expand_and_score(query_embedding, fb, w, unseen, scorer, config);
}

SessionGeometry::SessionGeometry(std::span<const double> query_embedding, std::span<const Document> docs,
                                 std::size_t examined, const SimilarityScorer& scorer)
    : n_(docs.size()), examined_(examined) {
  if (examined > docs.size()) throw InputError("session geometry: more examined than documents");
  pseudo_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) pseudo_[i] = query_score(query_embedding, docs[i], scorer);
  sim_.assign(examined_ * n_, 0.0);
  for (std::size_t j = 0; j < examined_; ++j) {
    for (std::size_t i = 0; i < n_; ++i) {
      sim_[j * n_ + i] = scorer.score(docs[j].embedding, docs[i].embedding);
    }
  }
}

bool SessionGeometry::expansion_scores(std::size_t h, std::span<const double> combined, const ExpansionConfig& config,
                                       std::vector<double>& out) const {
  if (h > examined_) throw InputError("session geometry: h exceeds the examined count");
  if (combined.size() != h) throw InputError("session geometry: expected one combined score per examined document");
  out.assign(pseudo_.begin() + static_cast<std::ptrdiff_t>(h), pseudo_.end());
  if (h == 0) return false;
  const std::vector<std::size_t> sel = select_feedback(combined, config.k);
  std::vector<double> s(sel.size());
  for (std::size_t t = 0; t < sel.size(); ++t) s[t] = combined[sel[t]];
  const std::vector<double> w = softmax_weights(s);
  for (std::size_t i = h; i < n_; ++i) {
    double rf = 0.0;
    for (std::size_t t = 0; t < sel.size(); ++t) rf += w[t] * sim_[sel[t] * n_ + i];
    out[i - h] = config.c * rf + (1.0 - config.c) * pseudo_[i];
  }
  return true;
}

}  // namespace brainrf
