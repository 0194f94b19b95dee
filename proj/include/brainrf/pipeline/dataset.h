#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "brainrf/core/types.h"
#include "brainrf/eeg/segment.h"

namespace brainrf {

/// Brain response to one stimulus, in whichever form it was recorded or
/// ingested. A precomputed score takes precedence over features, features
/// over a raw segment.
struct BrainInput {
  std::optional<double> score;
  std::optional<std::vector<double>> features;
  std::shared_ptr<const eeg::EegSegment> raw;

  bool present() const { return score.has_value() || features.has_value() || raw != nullptr; }
};

/// One examined document inside a session.
struct SessionRecord {
  std::string doc_id;
  bool clicked = false;
  std::optional<int> snippet_grade;
  std::optional<int> landing_grade;
  BrainInput snippet_brain;
  BrainInput landing_brain;
};

struct Query {
  std::string id;
  std::vector<double> embedding;
  /// Documents in presented order.
  std::vector<std::string> doc_ids;
};

/// One user's search for one query: examined records in order, then the
/// documents that were never examined.
struct Session {
  std::string id;
  std::string user_id;
  std::string query_id;
  std::int64_t timestamp = 0;
  std::optional<int> intent_cluster;
  std::vector<SessionRecord> records;
  std::vector<std::string> unseen;

  std::size_t h_max() const noexcept { return records.size(); }
  int click_count() const;
  /// Clicked records whose landing page was judged totally irrelevant.
  int bad_click_count() const;
  /// Examined ids followed by unseen ids.
  std::vector<std::string> presented_ids() const;
};

/// A clicked record with landing grade 1.
bool is_bad_click(const SessionRecord& record);

class Dataset {
 public:
  std::vector<Query> queries;
  std::vector<Document> documents;
  std::vector<Session> sessions;

  /// Rebuilds the id lookup tables; call after editing the vectors.
  void reindex();
  const Document& document(const std::string& id) const;
  const Query& query(const std::string& id) const;
  bool has_document(const std::string& id) const { return doc_index_.count(id) != 0; }
  bool has_query(const std::string& id) const { return query_index_.count(id) != 0; }

  /// Session indices grouped by user (users sorted by id), each group in
  /// timestamp order. Throws InputError when two sessions of one user share a timestamp.
  std::vector<std::pair<std::string, std::vector<std::size_t>>> sessions_by_user() const;

  /// Collects every integrity problem and throws one IntegrityError listing
  /// them all: unknown ids, duplicate ids, ragged embeddings, non-unit
  /// embeddings, grade ranges, landing grades without clicks, clicks without
  /// landing grades, and overlap between examined and unseen documents.
  void validate() const;

  /// Ids of documents named in sessions (examined or unseen) that lack an external label.
  std::vector<std::string> documents_missing_external_labels() const;

 private:
  std::unordered_map<std::string, std::size_t> doc_index_;
  std::unordered_map<std::string, std::size_t> query_index_;
};

}  // namespace brainrf
