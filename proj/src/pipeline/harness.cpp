#include "brainrf/pipeline/harness.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "brainrf/core/error.h"
#include "brainrf/core/seeding.h"
#include "brainrf/pipeline/config_json.h"
#include "brainrf/pipeline/parallel.h"
#include "brainrf/signals/similarity.h"

namespace brainrf {

std::string to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::Baseline: return "baseline";
    case MethodKind::Fixed: return "fixed";
    case MethodKind::Scenario: return "scenario";
    case MethodKind::Adaptive: return "adaptive";
  }
  return "fixed";
}

MethodKind parse_method_kind(const std::string& text) {
  if (text == "baseline") return MethodKind::Baseline;
  if (text == "fixed") return MethodKind::Fixed;
  if (text == "scenario") return MethodKind::Scenario;
  if (text == "adaptive") return MethodKind::Adaptive;
  throw ConfigError("unknown method kind '" + text + "'");
}

void HarnessConfig::validate() const {
  expansion.validate();
  if (metrics.size() == 0) throw ConfigError("no metrics requested");
  for (std::size_t k : metrics.ndcg_cutoffs) {
    if (k == 0) throw ConfigError("NDCG cutoffs must be positive");
  }
  for (const auto* list : {&irf_methods, &rrf_methods}) {
    std::map<std::string, int> names;
    for (const auto& m : *list) {
      if (m.name.empty()) throw ConfigError("method names must not be empty");
      if (names[m.name]++) throw ConfigError("duplicate method name '" + m.name + "'");
      if (m.kind != MethodKind::Baseline) m.weights.validate();
    }
  }
  for (const auto& m : rrf_methods) {
    if (m.kind == MethodKind::Adaptive) throw ConfigError("the adaptive method applies to iterative feedback only");
  }
  adaptive.synthesis.validate();
  candidate_triples(adaptive.grid);
  if (adaptive.cluster_count < 1) throw ConfigError("cluster count must be at least 1");
  if (decoding.personalization_threshold == 0 || decoding.retrain_every == 0) {
    throw ConfigError("decoding thresholds must be positive");
  }
}

std::string fingerprint_of(std::uint64_t seed, const std::string& config_json) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (int i = 0; i < 8; ++i) feed(static_cast<unsigned char>(seed >> (8 * i)));
  for (unsigned char c : config_json) feed(c);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void ExperimentReport::finalize() {
  aggregates.clear();
  std::map<std::pair<int, std::string>, std::size_t> slot;
  for (const auto& r : rows) {
    const auto key = std::make_pair(static_cast<int>(r.mode), r.method);
    auto it = slot.find(key);
    if (it == slot.end()) {
      it = slot.emplace(key, aggregates.size()).first;
      aggregates.push_back({r.mode, r.method, 0, std::vector<double>(metric_names.size(), 0.0)});
    }
    MethodAggregate& a = aggregates[it->second];
    ++a.rows;
    for (std::size_t m = 0; m < a.means.size(); ++m) a.means[m] += r.metrics[m];
  }
  for (auto& a : aggregates) {
    for (double& v : a.means) v /= static_cast<double>(a.rows);
  }
  fingerprint = fingerprint_of(seed, config_json);
}

std::vector<double> ExperimentReport::column(RfMode mode, const std::string& method, std::size_t metric) const {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.mode == mode && r.method == method) out.push_back(r.metrics.at(metric));
  }
  return out;
}

std::vector<const ReportRow*> ExperimentReport::rows_of(RfMode mode, const std::string& method) const {
  std::vector<const ReportRow*> out;
  for (const auto& r : rows) {
    if (r.mode == mode && r.method == method) out.push_back(&r);
  }
  return out;
}

std::size_t ExperimentReport::metric_index(const std::string& name) const {
  for (std::size_t i = 0; i < metric_names.size(); ++i) {
    if (metric_names[i] == name) return i;
  }
  throw InputError("report has no metric '" + name + "'");
}

namespace {

std::uint64_t row_seed(std::uint64_t seed, const std::string& session, std::size_t h) {
  return seed_combine(seed_combine(splitmix64(seed), fnv1a(session)), h);
}

std::vector<int> ranked_gains(const std::vector<double>& scores, const std::vector<int>& gains) {
  const auto order = stable_descending_order(scores);
  std::vector<int> out(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) out[r] = gains[order[r]];
  return out;
}

struct SessionRows {
  std::vector<ReportRow> rows;
  std::size_t skipped_empty = 0;
  std::size_t skipped_labels = 0;
};

// Resolves documents of a session in presented order.
std::vector<Document> presented_documents(const Dataset& dataset, const Session& s) {
  std::vector<Document> docs;
  for (const auto& id : s.presented_ids()) docs.push_back(dataset.document(id));
  return docs;
}

std::vector<int> cluster_labels(const std::vector<Document>& docs, int cluster_count, std::uint64_t seed) {
  const int q = std::min<int>(cluster_count, static_cast<int>(docs.size()));
  return cluster_documents(docs, q, seed).labels();
}

SessionRows irf_session(const Dataset& dataset, const Session& s, const SessionBrainScores& brain,
                        const HarnessConfig& config, const SynthesisParams& synthesis, std::uint64_t seed) {
  SessionRows out;
  const Query& q = dataset.query(s.query_id);
  const std::vector<Document> docs = presented_documents(dataset, s);
  const std::size_t n = docs.size();
  const std::size_t h_max = s.h_max();
  const CosineScorer scorer;
  const SessionGeometry geometry(q.embedding, docs, h_max, scorer);

  std::vector<std::string> ids;
  for (const auto& d : docs) ids.push_back(d.id);
  std::vector<int> clusters;
  const bool any_adaptive = std::any_of(config.irf_methods.begin(), config.irf_methods.end(),
                                        [](const MethodSpec& m) { return m.kind == MethodKind::Adaptive; });
  if (any_adaptive) clusters = cluster_labels(docs, config.adaptive.cluster_count, row_seed(seed, q.id, 0));

  std::vector<double> clicks(h_max), snippet(h_max), combined, scores;
  for (std::size_t i = 0; i < h_max; ++i) {
    clicks[i] = s.records[i].clicked ? 1.0 : 0.0;
    snippet[i] = brain.snippet[i];
  }
  const std::vector<double>& pseudo = geometry.pseudo();

  int n_clicks = 0, n_bad = 0;
  for (std::size_t h = 1; h <= h_max; ++h) {
    n_clicks += s.records[h - 1].clicked ? 1 : 0;
    n_bad += is_bad_click(s.records[h - 1]) ? 1 : 0;
    if (h >= n) {
      ++out.skipped_empty;
      continue;
    }
    std::vector<int> gains;
    bool labelled = true;
    for (std::size_t i = h; i < n; ++i) {
      if (!docs[i].external_relevant) {
        labelled = false;
        break;
      }
      gains.push_back(*docs[i].external_relevant ? 1 : 0);
    }
    if (!labelled) {
      ++out.skipped_labels;
      continue;
    }
    const std::vector<double> bs(snippet.begin(), snippet.begin() + static_cast<std::ptrdiff_t>(h));
    const std::vector<double> cs(clicks.begin(), clicks.begin() + static_cast<std::ptrdiff_t>(h));
    const std::vector<double> ps(pseudo.begin(), pseudo.begin() + static_cast<std::ptrdiff_t>(h));
    for (const MethodSpec& m : config.irf_methods) {
      CombinationWeights w = m.weights;
      if (m.kind == MethodKind::Baseline) {
        scores.assign(pseudo.begin() + static_cast<std::ptrdiff_t>(h), pseudo.end());
      } else {
        if (m.kind == MethodKind::Scenario) w = scenario_weights(RfMode::Iterative, n_clicks, false, m.weights);
        if (m.kind == MethodKind::Adaptive) {
          w = adaptive_search(geometry, ids, clusters, h, n_clicks, synthesis, config.adaptive.grid,
                              config.adaptive.metric, config.expansion, row_seed(seed, s.id, h))
                  .best;
        }
        combine_into(bs, cs, ps, w, combined);
        geometry.expansion_scores(h, combined, config.expansion, scores);
      }
      ReportRow row{RfMode::Iterative, s.user_id, s.id, s.query_id, h, n_clicks, n_bad, m.name, w,
                    config.metrics.evaluate(ranked_gains(scores, gains), 1)};
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

SessionRows rrf_session(const Dataset& dataset, const Session& s, const SessionBrainScores& brain,
                        const HarnessConfig& config) {
  SessionRows out;
  const Query& q = dataset.query(s.query_id);
  const std::size_t h = s.h_max();
  if (h == 0) {
    ++out.skipped_empty;
    return out;
  }
  std::vector<int> gains;
  for (const auto& r : s.records) {
    const std::optional<int>& g = r.clicked ? r.landing_grade : r.snippet_grade;
    if (!g) {
      ++out.skipped_labels;
      return out;
    }
    gains.push_back(*g - 1);
  }
  const CosineScorer scorer;
  std::vector<double> bs(h), cs(h), ps(h), scores;
  for (std::size_t i = 0; i < h; ++i) {
    const auto& r = s.records[i];
    bs[i] = r.clicked && brain.landing[i] ? *brain.landing[i] : brain.snippet[i];
    cs[i] = r.clicked ? 1.0 : 0.0;
    const Document& d = dataset.document(r.doc_id);
    ps[i] = d.pseudo_score ? *d.pseudo_score : scorer.score(q.embedding, d.embedding);
  }
  const int n_clicks = s.click_count();
  const int n_bad = s.bad_click_count();
  for (const MethodSpec& m : config.rrf_methods) {
    CombinationWeights w = m.weights;
    if (m.kind == MethodKind::Baseline) {
      scores = ps;
    } else {
      if (m.kind == MethodKind::Scenario) w = scenario_weights(RfMode::Retrospective, n_clicks, n_bad > 0, m.weights);
      combine_into(bs, cs, ps, w, scores);
    }
    ReportRow row{RfMode::Retrospective, s.user_id, s.id, s.query_id, h, n_clicks, n_bad, m.name, w,
                  config.metrics.evaluate(ranked_gains(scores, gains), 1)};
    out.rows.push_back(std::move(row));
  }
  return out;
}

template <typename PerSession>
ExperimentReport run_sessions(const Dataset& dataset, const DecodingResult& decoded, const HarnessConfig& config,
                              std::uint64_t seed, PerSession&& per_session) {
  if (decoded.sessions.size() != dataset.sessions.size()) {
    throw InputError("decoded scores do not cover the dataset's sessions");
  }
  std::vector<std::size_t> order;
  for (const auto& [user, idx] : dataset.sessions_by_user()) order.insert(order.end(), idx.begin(), idx.end());
  std::vector<SessionRows> parts(order.size());
  parallel_for(order.size(), config.threads, [&](std::size_t i) { parts[i] = per_session(order[i]); });

  ExperimentReport report;
  report.metric_names = config.metrics.names();
  report.seed = seed;
  report.config_json = to_json(config).dump();
  report.decoding = decoded.summary;
  for (auto& p : parts) {
    report.skipped_empty_unseen += p.skipped_empty;
    report.skipped_missing_labels += p.skipped_labels;
    for (auto& r : p.rows) report.rows.push_back(std::move(r));
  }
  if (report.skipped_missing_labels > 0) {
    report.warnings.push_back(std::to_string(report.skipped_missing_labels) + " row(s) skipped for missing labels");
  }
  if (decoded.summary.cold_start_sessions > 0) {
    report.warnings.push_back(std::to_string(decoded.summary.cold_start_sessions) +
                              " session(s) scored without a decoder (cold start)");
  }
  report.finalize();
  return report;
}

}  // namespace

SynthesisParams estimate_synthesis_from(const Dataset& dataset, const DecodingResult& decoded, int n_synth) {
  std::vector<LabelledSignal> data;
  for (std::size_t s = 0; s < dataset.sessions.size(); ++s) {
    const auto& recs = dataset.sessions[s].records;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (!recs[i].snippet_grade) continue;
      data.push_back({*recs[i].snippet_grade >= 2, recs[i].clicked, decoded.sessions.at(s).snippet.at(i)});
    }
  }
  return estimate_synthesis_params(data, n_synth);
}

ExperimentReport run_irf(const Dataset& dataset, const DecodingResult& decoded, const HarnessConfig& config,
                         std::uint64_t seed) {
  config.validate();
  HarnessConfig resolved = config;
  if (config.adaptive.estimate_synthesis) {
    resolved.adaptive.synthesis = estimate_synthesis_from(dataset, decoded, config.adaptive.synthesis.n_synth);
    resolved.adaptive.estimate_synthesis = false;
  }
  return run_sessions(dataset, decoded, resolved, seed, [&](std::size_t s) {
    return irf_session(dataset, dataset.sessions[s], decoded.sessions[s], resolved, resolved.adaptive.synthesis, seed);
  });
}

ExperimentReport run_irf(const Dataset& dataset, const HarnessConfig& config, std::uint64_t seed) {
  config.validate();
  return run_irf(dataset, decode_brain_scores(dataset, config.decoding, seed), config, seed);
}

ExperimentReport run_rrf(const Dataset& dataset, const DecodingResult& decoded, const HarnessConfig& config,
                         std::uint64_t seed) {
  config.validate();
  return run_sessions(dataset, decoded, config, seed, [&](std::size_t s) {
    return rrf_session(dataset, dataset.sessions[s], decoded.sessions[s], config);
  });
}

ExperimentReport run_rrf(const Dataset& dataset, const HarnessConfig& config, std::uint64_t seed) {
  config.validate();
  return run_rrf(dataset, decode_brain_scores(dataset, config.decoding, seed), config, seed);
}

namespace {

HarnessConfig with_adaptive(const HarnessConfig& config) {
  HarnessConfig c = config;
  const bool has = std::any_of(c.irf_methods.begin(), c.irf_methods.end(),
                               [](const MethodSpec& m) { return m.kind == MethodKind::Adaptive; });
  if (!has) c.irf_methods.push_back({"adaptive", MethodKind::Adaptive, {0.6, 0.2, 0.2}});
  return c;
}

}  // namespace

ExperimentReport run_adaptive_irf(const Dataset& dataset, const DecodingResult& decoded, const HarnessConfig& config,
                                  std::uint64_t seed) {
  return run_irf(dataset, decoded, with_adaptive(config), seed);
}

ExperimentReport run_adaptive_irf(const Dataset& dataset, const HarnessConfig& config, std::uint64_t seed) {
  const HarnessConfig c = with_adaptive(config);
  c.validate();
  return run_irf(dataset, decode_brain_scores(dataset, c.decoding, seed), c, seed);
}

}  // namespace brainrf
