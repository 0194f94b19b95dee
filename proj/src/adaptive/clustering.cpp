#include "brainrf/adaptive/clustering.h"

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "brainrf/core/error.h"

namespace brainrf {

ClusterAssignment::ClusterAssignment(std::vector<std::string> doc_ids, std::vector<int> labels)
    : ids_(std::move(doc_ids)), labels_(std::move(labels)) {
  if (ids_.size() != labels_.size()) throw InputError("cluster assignment: ids and labels differ in length");
  if (ids_.empty()) throw InputError("cluster assignment: no documents");
  int mx = -1;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (labels_[i] < 0) throw InputError("cluster assignment: negative label for '" + ids_[i] + "'");
    if (!index_.emplace(ids_[i], labels_[i]).second) {
      throw InputError("cluster assignment: duplicate document '" + ids_[i] + "'");
    }
    mx = std::max(mx, labels_[i]);
  }
  std::vector<bool> seen(static_cast<std::size_t>(mx) + 1, false);
  for (int l : labels_) seen[static_cast<std::size_t>(l)] = true;
  for (std::size_t c = 0; c < seen.size(); ++c) {
    if (!seen[c]) throw InputError("cluster assignment: cluster " + std::to_string(c) + " is empty");
  }
  cluster_count_ = mx + 1;
}

int ClusterAssignment::cluster_of(const std::string& doc_id) const {
  const auto it = index_.find(doc_id);
  if (it == index_.end()) throw InputError("cluster assignment: unknown document '" + doc_id + "'");
  return it->second;
}

std::vector<std::string> ClusterAssignment::members(int cluster) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (labels_[i] == cluster) out.push_back(ids_[i]);
  }
  return out;
}

namespace {

double sq_dist(const double* a, const double* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t d = 0; d < dim; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return s;
}

}  // namespace

std::vector<int> kmeans(std::span<const double> points, std::size_t dim, int k, std::uint64_t seed,
                        int max_iterations) {
  if (dim == 0 || points.size() % dim != 0) throw InputError("kmeans: point buffer does not match dimension");
  const std::size_t n = points.size() / dim;
  if (k < 1 || static_cast<std::size_t>(k) > n) throw InputError("kmeans: need 1 <= k <= number of points");
  const auto kk = static_cast<std::size_t>(k);
  std::mt19937_64 rng(seed);
  auto pt = [&](std::size_t i) { return points.data() + i * dim; };

  std::vector<double> centers(kk * dim);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  std::copy(pt(first), pt(first) + dim, centers.begin());
  for (std::size_t c = 1; c < kk; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], sq_dist(pt(i), centers.data() + (c - 1) * dim, dim));
      total += nearest[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (pick = 0; pick + 1 < n; ++pick) {
        u -= nearest[pick];
        if (u < 0.0) break;
      }
    } else {
      pick = c;
    }
    std::copy(pt(pick), pt(pick) + dim, centers.begin() + static_cast<std::ptrdiff_t>(c * dim));
  }

  std::vector<int> label(n, -1);
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < kk; ++c) {
        const double d = sq_dist(pt(i), centers.data() + c * dim, dim);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      if (label[i] != best) {
        label[i] = best;
        changed = true;
      }
    }
    std::vector<std::size_t> count(kk, 0);
    for (int l : label) ++count[static_cast<std::size_t>(l)];
    for (std::size_t c = 0; c < kk; ++c) {
      if (count[c] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (count[static_cast<std::size_t>(label[i])] <= 1) continue;
        const double d = sq_dist(pt(i), centers.data() + static_cast<std::size_t>(label[i]) * dim, dim);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      --count[static_cast<std::size_t>(label[far])];
      label[far] = static_cast<int>(c);
      count[c] = 1;
      changed = true;
    }
    std::fill(centers.begin(), centers.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double* ctr = centers.data() + static_cast<std::size_t>(label[i]) * dim;
      for (std::size_t d = 0; d < dim; ++d) ctr[d] += pt(i)[d];
    }
    for (std::size_t c = 0; c < kk; ++c) {
      for (std::size_t d = 0; d < dim; ++d) centers[c * dim + d] /= static_cast<double>(count[c]);
    }
    if (!changed) break;
  }
  return label;
}

ClusterAssignment cluster_documents(std::span<const Document> docs, int q_m, std::uint64_t seed) {
  if (docs.empty()) throw InputError("cluster_documents: no documents");
  std::vector<std::string> ids;
  std::size_t labelled = 0;
  for (const auto& d : docs) {
    ids.push_back(d.id);
    if (d.cluster) ++labelled;
  }
  if (labelled == docs.size()) {
    std::vector<int> labels;
    std::set<int> distinct;
    for (const auto& d : docs) {
      labels.push_back(*d.cluster);
      distinct.insert(*d.cluster);
    }
    const bool contiguous = *distinct.begin() == 0 && *distinct.rbegin() == static_cast<int>(distinct.size()) - 1;
    if (!contiguous) {
      std::map<int, int> remap;
      for (int l : distinct) remap.emplace(l, static_cast<int>(remap.size()));
      for (int& l : labels) l = remap.at(l);
    }
    return ClusterAssignment(std::move(ids), std::move(labels));
  }
  if (labelled != 0) throw InputError("cluster_documents: only some documents carry cluster labels");
  if (q_m < 1 || static_cast<std::size_t>(q_m) > docs.size()) {
    throw InputError("cluster_documents: q_m = " + std::to_string(q_m) + " but there are " +
                     std::to_string(docs.size()) + " documents");
  }
  const std::size_t dim = docs[0].embedding.size();
  if (dim == 0) throw InputError("cluster_documents: documents have no embeddings");
  std::vector<double> pts;
  pts.reserve(docs.size() * dim);
  for (const auto& d : docs) {
    if (d.embedding.size() != dim) throw InputError("cluster_documents: embedding dimensions differ ('" + d.id + "')");
    pts.insert(pts.end(), d.embedding.begin(), d.embedding.end());
  }
  return ClusterAssignment(std::move(ids), kmeans(pts, dim, q_m, seed));
}

}  // namespace brainrf
