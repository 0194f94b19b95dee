#include "brainrf/io/json_codec.h"

#include <set>

#include "brainrf/core/error.h"

namespace brainrf::io {

using Json = nlohmann::ordered_json;

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T>
T as(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
std::optional<T> optional_field(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return as<T>(j, key);
}

void only_fields(const Json& j, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw InputError("record is not a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) throw InputError("unknown field '" + key + "'");
  }
}

}  // namespace

Json query_to_json(const Query& q) {
  Json j;
  j["id"] = q.id;
  j["embedding"] = q.embedding;
  j["doc_ids"] = q.doc_ids;
  return j;
}

Json document_to_json(const Document& d) {
  Json j;
  j["id"] = d.id;
  j["embedding"] = d.embedding;
  if (d.external_relevant) j["external_relevant"] = *d.external_relevant;
  if (d.cluster) j["cluster"] = *d.cluster;
  if (d.pseudo_score) j["pseudo_score"] = *d.pseudo_score;
  return j;
}

Json session_to_json(const Session& s) {
  Json j;
  j["id"] = s.id;
  j["user"] = s.user_id;
  j["query"] = s.query_id;
  j["timestamp"] = s.timestamp;
  if (s.intent_cluster) j["intent_cluster"] = *s.intent_cluster;
  Json recs = Json::array();
  for (const auto& r : s.records) {
    Json rj;
    rj["doc"] = r.doc_id;
    rj["clicked"] = r.clicked;
    if (r.snippet_grade) rj["snippet_grade"] = *r.snippet_grade;
    if (r.landing_grade) rj["landing_grade"] = *r.landing_grade;
    if (r.snippet_brain.score) rj["snippet_score"] = *r.snippet_brain.score;
    if (r.landing_brain.score) rj["landing_score"] = *r.landing_brain.score;
    recs.push_back(rj);
  }
  j["records"] = recs;
  j["unseen"] = s.unseen;
  return j;
}

Query query_from_json(const Json& j) {
  only_fields(j, {"id", "embedding", "doc_ids"});
  Query q;
  q.id = as<std::string>(j, "id");
  q.embedding = as<std::vector<double>>(j, "embedding");
  q.doc_ids = as<std::vector<std::string>>(j, "doc_ids");
  return q;
}

Document document_from_json(const Json& j) {
  only_fields(j, {"id", "embedding", "external_relevant", "cluster", "pseudo_score"});
  Document d;
  d.id = as<std::string>(j, "id");
  if (j.contains("embedding")) d.embedding = as<std::vector<double>>(j, "embedding");
  d.external_relevant = optional_field<bool>(j, "external_relevant");
  d.cluster = optional_field<int>(j, "cluster");
  d.pseudo_score = optional_field<double>(j, "pseudo_score");
  return d;
}

Session session_from_json(const Json& j, bool& has_unseen) {
  only_fields(j, {"id", "user", "query", "timestamp", "intent_cluster", "records", "unseen"});
  Session s;
  s.id = as<std::string>(j, "id");
  s.user_id = as<std::string>(j, "user");
  s.query_id = as<std::string>(j, "query");
  s.timestamp = as<std::int64_t>(j, "timestamp");
  s.intent_cluster = optional_field<int>(j, "intent_cluster");
  const Json& recs = field(j, "records");
  if (!recs.is_array()) throw InputError("field 'records' must be an array");
  for (const auto& rj : recs) {
    only_fields(rj, {"doc", "clicked", "snippet_grade", "landing_grade", "snippet_score", "landing_score"});
    SessionRecord r;
    r.doc_id = as<std::string>(rj, "doc");
    r.clicked = as<bool>(rj, "clicked");
    r.snippet_grade = optional_field<int>(rj, "snippet_grade");
    r.landing_grade = optional_field<int>(rj, "landing_grade");
    r.snippet_brain.score = optional_field<double>(rj, "snippet_score");
    r.landing_brain.score = optional_field<double>(rj, "landing_score");
    s.records.push_back(std::move(r));
  }
  has_unseen = j.contains("unseen");
  if (has_unseen) s.unseen = as<std::vector<std::string>>(j, "unseen");
  return s;
}

}  // namespace brainrf::io
