#include "brainrf/pipeline/config_json.h"

#include <set>

#include "brainrf/core/error.h"

namespace brainrf {

using Json = nlohmann::ordered_json;

namespace {

// Reads fields of one JSON object, rejecting keys that were never asked for.
class Reader {
 public:
  Reader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }
  ~Reader() = default;

  template <typename T>
  void get(const char* key, T& out) {
    known_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(where_ + "." + key + ": " + e.what());
    }
  }

  const Json* sub(const char* key) {
    known_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!known_.count(key)) throw ConfigError(where_ + ": unknown field '" + key + "'");
    }
  }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> known_;
};

}  // namespace

Json to_json(const CombinationWeights& w) { return Json::array({w.brain, w.click, w.pseudo}); }

CombinationWeights weights_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("weights must be an array of three numbers");
  try {
    CombinationWeights w{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    w.validate();
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("weights: ") + e.what());
  }
}

Json to_json(const SynthesisParams& p) {
  Json j;
  j["p_click_rel"] = p.p_click_rel;
  j["p_click_irrel"] = p.p_click_irrel;
  j["mu_rel"] = p.mu_rel;
  j["sigma_rel"] = p.sigma_rel;
  j["mu_irrel"] = p.mu_irrel;
  j["sigma_irrel"] = p.sigma_irrel;
  j["n_synth"] = p.n_synth;
  return j;
}

SynthesisParams synthesis_from_json(const Json& j) {
  SynthesisParams p;
  Reader r(j, "synthesis");
  r.get("p_click_rel", p.p_click_rel);
  r.get("p_click_irrel", p.p_click_irrel);
  r.get("mu_rel", p.mu_rel);
  r.get("sigma_rel", p.sigma_rel);
  r.get("mu_irrel", p.mu_irrel);
  r.get("sigma_irrel", p.sigma_irrel);
  r.get("n_synth", p.n_synth);
  r.finish();
  p.validate();
  return p;
}

Json to_json(const DecodingConfig& c) {
  Json j;
  j["C"] = c.svm.C;
  j["gamma"] = c.svm.gamma;
  j["tolerance"] = c.svm.tolerance;
  j["calibration_folds"] = c.svm.calibration_folds;
  j["personalization_threshold"] = c.personalization_threshold;
  j["retrain_every"] = c.retrain_every;
  j["generalized_sample_cap"] = c.generalized_sample_cap;
  j["post_ms"] = c.preprocess.post_ms;
  j["target_rate_hz"] = c.preprocess.target_rate_hz;
  return j;
}

DecodingConfig decoding_from_json(const Json& j) {
  DecodingConfig c;
  Reader r(j, "decoding");
  r.get("C", c.svm.C);
  r.get("gamma", c.svm.gamma);
  r.get("tolerance", c.svm.tolerance);
  r.get("calibration_folds", c.svm.calibration_folds);
  r.get("personalization_threshold", c.personalization_threshold);
  r.get("retrain_every", c.retrain_every);
  r.get("generalized_sample_cap", c.generalized_sample_cap);
  r.get("post_ms", c.preprocess.post_ms);
  r.get("target_rate_hz", c.preprocess.target_rate_hz);
  r.finish();
  return c;
}

namespace {

Json methods_json(const std::vector<MethodSpec>& methods) {
  Json arr = Json::array();
  for (const auto& m : methods) {
    Json j;
    j["name"] = m.name;
    j["kind"] = to_string(m.kind);
    j["weights"] = to_json(m.weights);
    arr.push_back(j);
  }
  return arr;
}

std::vector<MethodSpec> methods_from(const Json& arr, const std::string& where) {
  if (!arr.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<MethodSpec> out;
  for (const auto& j : arr) {
    MethodSpec m;
    Reader r(j, where);
    std::string kind = "fixed";
    r.get("name", m.name);
    r.get("kind", kind);
    m.kind = parse_method_kind(kind);
    if (const Json* w = r.sub("weights")) m.weights = weights_from_json(*w);
    r.finish();
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

Json to_json(const HarnessConfig& c) {
  Json j;
  j["irf_methods"] = methods_json(c.irf_methods);
  j["rrf_methods"] = methods_json(c.rrf_methods);
  j["k"] = c.expansion.k;
  j["c"] = c.expansion.c;
  j["ndcg_cutoffs"] = c.metrics.ndcg_cutoffs;
  j["include_map"] = c.metrics.include_map;
  j["decoding"] = to_json(c.decoding);
  Json a;
  a["synthesis"] = to_json(c.adaptive.synthesis);
  a["estimate_synthesis"] = c.adaptive.estimate_synthesis;
  a["grid"] = c.adaptive.grid;
  a["metric"] = c.adaptive.metric.name();
  a["cluster_count"] = c.adaptive.cluster_count;
  j["adaptive"] = a;
  return j;
}

HarnessConfig harness_from_json(const Json& j) {
  HarnessConfig c;
  Reader r(j, "config");
  if (const Json* m = r.sub("irf_methods")) c.irf_methods = methods_from(*m, "irf_methods");
  if (const Json* m = r.sub("rrf_methods")) c.rrf_methods = methods_from(*m, "rrf_methods");
  r.get("k", c.expansion.k);
  r.get("c", c.expansion.c);
  r.get("ndcg_cutoffs", c.metrics.ndcg_cutoffs);
  r.get("include_map", c.metrics.include_map);
  if (const Json* d = r.sub("decoding")) c.decoding = decoding_from_json(*d);
  if (const Json* a = r.sub("adaptive")) {
    Reader ar(*a, "adaptive");
    if (const Json* s = ar.sub("synthesis")) c.adaptive.synthesis = synthesis_from_json(*s);
    ar.get("estimate_synthesis", c.adaptive.estimate_synthesis);
    ar.get("grid", c.adaptive.grid);
    std::string metric = c.adaptive.metric.name();
    ar.get("metric", metric);
    c.adaptive.metric = RankingMetric::parse(metric);
    ar.get("cluster_count", c.adaptive.cluster_count);
    ar.finish();
  }
  r.finish();
  c.validate();
  return c;
}

Json to_json(const GeneratorConfig& c) {
  Json j;
  j["users"] = c.users;
  j["sessions"] = c.sessions;
  j["docs_per_query"] = c.docs_per_query;
  j["embedding_dim"] = c.embedding_dim;
  Json counts = Json::array();
  for (const auto& [k, p] : c.cluster_counts) counts.push_back(Json::array({k, p}));
  j["cluster_counts"] = counts;
  j["cluster_spread"] = c.cluster_spread;
  j["doc_spread"] = c.doc_spread;
  j["query_intent_bias"] = c.query_intent_bias;
  j["examined_mean"] = c.examined_mean;
  j["examined_sd"] = c.examined_sd;
  j["p_relevant_in_cluster"] = c.p_relevant_in_cluster;
  j["p_relevant_out_cluster"] = c.p_relevant_out_cluster;
  j["click_mean"] = c.click_mean;
  j["bad_click_rate"] = c.bad_click_rate;
  j["plain_click_prob"] = c.plain_click_prob;
  j["browse_only_rate"] = c.browse_only_rate;
  j["snippet_grades_relevant"] = c.snippet_grades_relevant;
  j["snippet_grades_irrelevant"] = c.snippet_grades_irrelevant;
  j["landing_grades_relevant"] = c.landing_grades_relevant;
  j["landing_grades_irrelevant"] = c.landing_grades_irrelevant;
  j["target_auc"] = c.target_auc;
  j["emission"] = to_string(c.emission);
  j["latent_dim"] = c.latent_dim;
  j["user_specificity_deg"] = c.user_specificity_deg;
  j["user_offset"] = c.user_offset;
  j["feature_noise"] = c.feature_noise;
  j["separation_gain"] = c.separation_gain;
  j["raw_rate_hz"] = c.raw_rate_hz;
  j["raw_pre_ms"] = c.raw_pre_ms;
  j["raw_post_ms"] = c.raw_post_ms;
  return j;
}

GeneratorConfig generator_from_json(const Json& j) {
  GeneratorConfig c;
  Reader r(j, "generator");
  r.get("users", c.users);
  r.get("sessions", c.sessions);
  r.get("docs_per_query", c.docs_per_query);
  r.get("embedding_dim", c.embedding_dim);
  if (const Json* counts = r.sub("cluster_counts")) {
    c.cluster_counts.clear();
    for (const auto& e : *counts) {
      if (!e.is_array() || e.size() != 2) throw ConfigError("cluster_counts entries must be [count, probability]");
      c.cluster_counts.emplace_back(e[0].get<int>(), e[1].get<double>());
    }
  }
  r.get("cluster_spread", c.cluster_spread);
  r.get("doc_spread", c.doc_spread);
  r.get("query_intent_bias", c.query_intent_bias);
  r.get("examined_mean", c.examined_mean);
  r.get("examined_sd", c.examined_sd);
  r.get("p_relevant_in_cluster", c.p_relevant_in_cluster);
  r.get("p_relevant_out_cluster", c.p_relevant_out_cluster);
  r.get("click_mean", c.click_mean);
  r.get("bad_click_rate", c.bad_click_rate);
  r.get("plain_click_prob", c.plain_click_prob);
  r.get("browse_only_rate", c.browse_only_rate);
  r.get("snippet_grades_relevant", c.snippet_grades_relevant);
  r.get("snippet_grades_irrelevant", c.snippet_grades_irrelevant);
  r.get("landing_grades_relevant", c.landing_grades_relevant);
  r.get("landing_grades_irrelevant", c.landing_grades_irrelevant);
  r.get("target_auc", c.target_auc);
  std::string emission = to_string(c.emission);
  r.get("emission", emission);
  c.emission = parse_emission_mode(emission);
  r.get("latent_dim", c.latent_dim);
  r.get("user_specificity_deg", c.user_specificity_deg);
  r.get("user_offset", c.user_offset);
  r.get("feature_noise", c.feature_noise);
  r.get("separation_gain", c.separation_gain);
  r.get("raw_rate_hz", c.raw_rate_hz);
  r.get("raw_pre_ms", c.raw_pre_ms);
  r.get("raw_post_ms", c.raw_post_ms);
  r.finish();
  c.validate();
  return c;
}

}  // namespace brainrf
