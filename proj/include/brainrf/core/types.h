#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace brainrf {

/// Which feedback task a score or weight triple belongs to.
///   Iterative:     re-rank the unseen documents while the session is running.
///   Retrospective: re-rank the examined documents once the session has ended.
enum class RfMode { Iterative, Retrospective };

std::string_view to_string(RfMode mode);
RfMode parse_rf_mode(std::string_view text);

/// Four-point relevance annotation (1 = totally irrelevant, 4 = perfectly relevant).
class RelevanceGrade {
 public:
  explicit RelevanceGrade(int value);

  int value() const noexcept { return value_; }
  /// Graded gain used by NDCG: grade - 1, in {0..3}.
  int gain() const noexcept { return value_ - 1; }
  /// Grades 2..4 count as relevant.
  bool is_relevant() const noexcept { return value_ >= 2; }

  friend bool operator==(RelevanceGrade, RelevanceGrade) = default;

 private:
  int value_;
};

/// A retrievable item. The embedding represents the snippet and has unit norm.
struct Document {
  std::string id;
  std::vector<double> embedding;
  /// Third-party binary judgement of the snippet against the task description.
  std::optional<bool> external_relevant;
  /// Subtopic / intent cluster label, when one was ingested.
  std::optional<int> cluster;
  /// Precomputed query-document score in [0,1] from an external ranker.
  std::optional<double> pseudo_score;
};

inline constexpr double kUnitNormTolerance = 1e-6;

/// Throws InputError when the embedding is empty or not unit length.
void validate_embedding(const Document& doc);

/// Scales `v` to unit Euclidean norm. Throws InputError on a zero vector.
void normalize_in_place(std::vector<double>& v);

struct ScoreEntry {
  std::string doc_id;
  double score = 0.0;
  bool masked = false;
};

/// Per-document scores in examination (or candidate) order, with a mask for
/// entries whose signal is unavailable.
class ScoreVector {
 public:
  ScoreVector() = default;

  void push(std::string doc_id, double score);
  void push_masked(std::string doc_id);

  const std::vector<ScoreEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const ScoreEntry& operator[](std::size_t i) const { return entries_[i]; }

  std::vector<std::string> ids() const;
  /// Scores in order; throws InputError if any entry is masked.
  std::vector<double> unmasked_scores() const;
  bool any_masked() const;

  /// Throws InputError on duplicate ids or an unmasked score outside [0,1].
  void validate_unit_range() const;
  /// Throws InputError on duplicate ids.
  void validate_unique_ids() const;

 private:
  std::vector<ScoreEntry> entries_;
};

struct RankedEntry {
  std::string doc_id;
  double score = 0.0;
};

/// Documents sorted by descending score. Ties keep their input order.
class RankedList {
 public:
  RankedList() = default;

  /// Stable descending sort of the unmasked entries. Throws InputError on masked entries.
  static RankedList from_scores(const ScoreVector& scores);
  /// Takes ids in the given order as-is; scores must already be non-increasing.
  static RankedList from_ordered(std::vector<RankedEntry> entries);

  const std::vector<RankedEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::vector<std::string> ids() const;

 private:
  std::vector<RankedEntry> entries_;
};

/// Indices of `scores` ordered by descending value, ties by ascending index.
std::vector<std::size_t> stable_descending_order(const std::vector<double>& scores);

}  // namespace brainrf
