#pragma once

#include <json.hpp>

#include "brainrf/pipeline/dataset.h"

namespace brainrf::io {

// Line records of the dataset files.
//
// queries.jsonl    {"id", "embedding": [..], "doc_ids": [..]}
// documents.jsonl  {"id", "embedding": [..], "external_relevant"?: bool,
//                   "cluster"?: int, "pseudo_score"?: number}
// sessions.jsonl   {"id", "user", "query", "timestamp", "intent_cluster"?,
//                   "records": [{"doc", "clicked", "snippet_grade"?, "landing_grade"?,
//                                "snippet_score"?, "landing_score"?}],
//                   "unseen"?: [..]}
//
// A missing "unseen" list means every query document that was not examined,
// in the query's order. Brain features and raw segments live in the binary
// EEG files, not in these records.

nlohmann::ordered_json query_to_json(const Query& q);
nlohmann::ordered_json document_to_json(const Document& d);
nlohmann::ordered_json session_to_json(const Session& s);

/// Throw InputError with the offending field; callers add file and line.
Query query_from_json(const nlohmann::ordered_json& j);
Document document_from_json(const nlohmann::ordered_json& j);
/// `unseen` is left empty when absent; the bundle loader fills it in.
Session session_from_json(const nlohmann::ordered_json& j, bool& has_unseen);

}  // namespace brainrf::io
