#include "brainrf/signals/signal_scores.h"

#include <cmath>

#include "brainrf/core/error.h"

namespace brainrf {

namespace {

void check_unit(double v, const std::string& what, const std::string& id) {
  if (!(v >= 0.0 && v <= 1.0)) throw InputError(what + " for '" + id + "' is outside [0,1]");
}

}  // namespace

void validate_record(const ExaminationRecord& record) {
  if (record.landing_brain_score && !record.clicked) {
    throw InputError("record '" + record.doc_id + "' has a landing score but was not clicked");
  }
}

ScoreVector pseudo_scores(std::span<const double> query_embedding, std::span<const Document> docs,
                          const SimilarityScorer& scorer) {
  ScoreVector out;
  for (const Document& d : docs) {
    if (d.pseudo_score) {
      check_unit(*d.pseudo_score, "pseudo score", d.id);
      out.push(d.id, *d.pseudo_score);
      continue;
    }
    if (d.embedding.empty()) throw InputError("document '" + d.id + "' has no representation");
    const double s = scorer.score(query_embedding, d.embedding);
    check_unit(s, "similarity", d.id);
    out.push(d.id, s);
  }
  return out;
}

ScoreVector click_scores(std::span<const ExaminationRecord> records) {
  ScoreVector out;
  for (const auto& r : records) out.push(r.doc_id, r.clicked ? 1.0 : 0.0);
  return out;
}

ScoreVector brain_scores_select(std::span<const ExaminationRecord> records, RfMode mode) {
  ScoreVector out;
  for (const auto& r : records) {
    double v = r.snippet_brain_score;
    if (mode == RfMode::Retrospective && r.clicked && r.landing_brain_score) v = *r.landing_brain_score;
    check_unit(v, "brain score", r.doc_id);
    out.push(r.doc_id, v);
  }
  return out;
}

}  // namespace brainrf
