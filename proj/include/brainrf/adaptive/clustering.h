#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "brainrf/core/types.h"

namespace brainrf {

/// Intent cluster of every document of one query. Clusters are numbered
/// 0..cluster_count()-1 and none is empty.
class ClusterAssignment {
 public:
  ClusterAssignment() = default;
  /// Throws InputError on length mismatch, duplicate ids, negative labels or
  /// an empty cluster index below the maximum label.
  ClusterAssignment(std::vector<std::string> doc_ids, std::vector<int> labels);

  int cluster_count() const noexcept { return cluster_count_; }
  const std::vector<std::string>& doc_ids() const noexcept { return ids_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  bool contains(const std::string& doc_id) const { return index_.count(doc_id) != 0; }
  /// Throws InputError for an unknown id.
  int cluster_of(const std::string& doc_id) const;
  std::vector<std::string> members(int cluster) const;

  friend bool operator==(const ClusterAssignment& a, const ClusterAssignment& b) {
    return a.ids_ == b.ids_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> ids_;
  std::vector<int> labels_;
  int cluster_count_ = 0;
  std::unordered_map<std::string, int> index_;
};

/// Ingested labels are passed through when every document has one (relabelled
/// to 0..m-1 in order of first label value only if they are not already
/// contiguous). Otherwise seeded k-means++ on the embeddings with q_m clusters.
/// Throws InputError when q_m < 1, q_m > |docs|, or only some documents carry labels.
ClusterAssignment cluster_documents(std::span<const Document> docs, int q_m, std::uint64_t seed);

/// Lloyd's k-means with k-means++ seeding over row-major points. Empty
/// clusters are refilled with the point farthest from its centroid.
std::vector<int> kmeans(std::span<const double> points, std::size_t dim, int k, std::uint64_t seed,
                        int max_iterations = 100);

}  // namespace brainrf
