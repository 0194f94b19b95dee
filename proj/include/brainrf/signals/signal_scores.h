#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brainrf/core/types.h"
#include "brainrf/signals/similarity.h"

namespace brainrf {

/// One examined document as seen by the feedback engine.
struct ExaminationRecord {
  std::string doc_id;
  bool clicked = false;
  /// Decoded relevance of the brain response to the snippet.
  double snippet_brain_score = 0.0;
  /// Decoded relevance of the landing-page response; only exists after a click.
  std::optional<double> landing_brain_score;
};

/// Throws InputError when a landing score is present on a non-clicked record.
void validate_record(const ExaminationRecord& record);

/// Query-document scores. A document's ingested pseudo_score wins over the
/// scorer; otherwise the scorer compares the query with the snippet embedding.
ScoreVector pseudo_scores(std::span<const double> query_embedding, std::span<const Document> docs,
                          const SimilarityScorer& scorer);

/// 1 for clicked records, 0 otherwise.
ScoreVector click_scores(std::span<const ExaminationRecord> records);

/// Iterative: the snippet score. Retrospective: the landing score when one
/// exists, else the snippet score.
ScoreVector brain_scores_select(std::span<const ExaminationRecord> records, RfMode mode);

}  // namespace brainrf
