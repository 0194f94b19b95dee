#include "brainrf/pipeline/dataset.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "brainrf/core/error.h"

namespace brainrf {

bool is_bad_click(const SessionRecord& record) {
  return record.clicked && record.landing_grade && *record.landing_grade == 1;
}

int Session::click_count() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.clicked; }));
}

int Session::bad_click_count() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(), is_bad_click));
}

std::vector<std::string> Session::presented_ids() const {
  std::vector<std::string> out;
  out.reserve(records.size() + unseen.size());
  for (const auto& r : records) out.push_back(r.doc_id);
  out.insert(out.end(), unseen.begin(), unseen.end());
  return out;
}

void Dataset::reindex() {
  doc_index_.clear();
  query_index_.clear();
  for (std::size_t i = 0; i < documents.size(); ++i) doc_index_.emplace(documents[i].id, i);
  for (std::size_t i = 0; i < queries.size(); ++i) query_index_.emplace(queries[i].id, i);
}

const Document& Dataset::document(const std::string& id) const {
  const auto it = doc_index_.find(id);
  if (it == doc_index_.end()) throw InputError("unknown document '" + id + "'");
  return documents[it->second];
}

const Query& Dataset::query(const std::string& id) const {
  const auto it = query_index_.find(id);
  if (it == query_index_.end()) throw InputError("unknown query '" + id + "'");
  return queries[it->second];
}

std::vector<std::pair<std::string, std::vector<std::size_t>>> Dataset::sessions_by_user() const {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < sessions.size(); ++i) groups[sessions[i].user_id].push_back(i);
  std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
  for (auto& [user, idx] : groups) {
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return sessions[a].timestamp < sessions[b].timestamp; });
    for (std::size_t t = 1; t < idx.size(); ++t) {
      if (sessions[idx[t]].timestamp == sessions[idx[t - 1]].timestamp) {
        throw InputError("sessions '" + sessions[idx[t - 1]].id + "' and '" + sessions[idx[t]].id + "' of user '" +
                         user + "' share a timestamp");
      }
    }
    out.emplace_back(user, std::move(idx));
  }
  return out;
}

namespace {

bool grade_ok(const std::optional<int>& g) { return !g || (*g >= 1 && *g <= 4); }

}  // namespace

void Dataset::validate() const {
  std::vector<std::string> problems;
  auto problem = [&](std::string s) { problems.push_back(std::move(s)); };

  std::unordered_set<std::string> doc_ids, query_ids, session_ids;
  std::size_t dim = 0;
  std::string dim_owner;
  for (const auto& d : documents) {
    if (!doc_ids.insert(d.id).second) problem("duplicate document id '" + d.id + "'");
    if (!d.embedding.empty()) {
      if (dim == 0) {
        dim = d.embedding.size();
        dim_owner = d.id;
      } else if (d.embedding.size() != dim) {
        problem("embedding dimension mismatch: '" + dim_owner + "' has " + std::to_string(dim) + ", '" + d.id +
                "' has " + std::to_string(d.embedding.size()));
      }
      double norm = 0.0;
      for (double v : d.embedding) norm += v * v;
      if (std::abs(std::sqrt(norm) - 1.0) > kUnitNormTolerance) problem("embedding of '" + d.id + "' is not unit norm");
    } else if (!d.pseudo_score) {
      problem("document '" + d.id + "' has neither an embedding nor a pseudo score");
    }
    if (d.pseudo_score && !(*d.pseudo_score >= 0.0 && *d.pseudo_score <= 1.0)) {
      problem("pseudo score of '" + d.id + "' is outside [0,1]");
    }
  }
  for (const auto& q : queries) {
    if (!query_ids.insert(q.id).second) problem("duplicate query id '" + q.id + "'");
    if (dim != 0 && !q.embedding.empty() && q.embedding.size() != dim) {
      problem("query '" + q.id + "' embedding has dimension " + std::to_string(q.embedding.size()) + ", documents have " +
              std::to_string(dim));
    }
    for (const auto& id : q.doc_ids) {
      if (!doc_ids.count(id)) problem("query '" + q.id + "' references unknown document '" + id + "'");
    }
  }
  for (const auto& s : sessions) {
    if (!session_ids.insert(s.id).second) problem("duplicate session id '" + s.id + "'");
    if (!query_ids.count(s.query_id)) problem("session '" + s.id + "' references unknown query '" + s.query_id + "'");
    std::unordered_set<std::string> seen;
    for (const auto& r : s.records) {
      if (!doc_ids.count(r.doc_id)) problem("session '" + s.id + "' references unknown document '" + r.doc_id + "'");
      if (!seen.insert(r.doc_id).second) problem("session '" + s.id + "' examines '" + r.doc_id + "' twice");
      if (!grade_ok(r.snippet_grade) || !grade_ok(r.landing_grade)) {
        problem("session '" + s.id + "' has a grade outside 1..4 for '" + r.doc_id + "'");
      }
      if (r.landing_grade && !r.clicked) {
        problem("session '" + s.id + "' has a landing grade for unclicked '" + r.doc_id + "'");
      }
      if (r.clicked && !r.landing_grade) {
        problem("session '" + s.id + "' has no landing grade for clicked '" + r.doc_id + "'");
      }
      if (r.landing_brain.present() && !r.clicked) {
        problem("session '" + s.id + "' has a landing brain response for unclicked '" + r.doc_id + "'");
      }
      for (const auto* b : {&r.snippet_brain, &r.landing_brain}) {
        if (b->score && !(*b->score >= 0.0 && *b->score <= 1.0)) {
          problem("session '" + s.id + "' has a brain score outside [0,1] for '" + r.doc_id + "'");
        }
      }
    }
    for (const auto& u : s.unseen) {
      if (!doc_ids.count(u)) problem("session '" + s.id + "' references unknown document '" + u + "'");
      if (!seen.insert(u).second) problem("session '" + s.id + "' lists '" + u + "' twice");
    }
  }
  if (!problems.empty()) {
    std::ostringstream os;
    os << problems.size() << " integrity problem(s):";
    for (const auto& p : problems) os << "\n  " << p;
    throw IntegrityError(os.str());
  }
}

std::vector<std::string> Dataset::documents_missing_external_labels() const {
  std::set<std::string> missing;
  for (const auto& s : sessions) {
    for (const auto& id : s.presented_ids()) {
      const auto it = doc_index_.find(id);
      if (it != doc_index_.end() && !documents[it->second].external_relevant) missing.insert(id);
    }
  }
  return {missing.begin(), missing.end()};
}

}  // namespace brainrf
