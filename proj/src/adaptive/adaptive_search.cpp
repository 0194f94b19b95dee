#include "brainrf/adaptive/adaptive_search.h"

#include <algorithm>
#include <map>
#include <random>
#include <unordered_map>

#include "brainrf/core/error.h"
#include "brainrf/core/metrics.h"
#include "brainrf/core/seeding.h"

namespace brainrf {

double RankingMetric::evaluate(std::span<const int> gains) const {
  if (kind == Kind::Ndcg) return ndcg_at_k(gains, k);
  std::vector<int> rel(gains.size());
  for (std::size_t i = 0; i < gains.size(); ++i) rel[i] = gains[i] >= 1 ? 1 : 0;
  return average_precision(rel);
}

std::string RankingMetric::name() const {
  return kind == Kind::Ndcg ? "ndcg@" + std::to_string(k) : "map";
}

RankingMetric RankingMetric::parse(const std::string& text) {
  if (text == "map") return {Kind::AveragePrecision, 0};
  if (text.rfind("ndcg@", 0) == 0) {
    try {
      std::size_t used = 0;
      const int k = std::stoi(text.substr(5), &used);
      if (used == text.size() - 5 && k >= 1) return {Kind::Ndcg, static_cast<std::size_t>(k)};
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("unknown metric '" + text + "' (expected ndcg@K or map)");
}

namespace {

struct Draw {
  std::vector<double> clicks;
  std::vector<double> brain;
};

struct ClusterTable {
  std::vector<Draw> draws;
  std::vector<int> truth;  // over unseen positions
};

}  // namespace

std::uint64_t synthesis_draw_seed(std::uint64_t seed, const std::string& cluster_key, int draw, int stream) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ fnv1a(cluster_key));
  h = splitmix64(h ^ static_cast<std::uint64_t>(draw));
  return splitmix64(h ^ static_cast<std::uint64_t>(stream));
}

AdaptiveSearchResult adaptive_search(const SessionGeometry& geometry, std::span<const std::string> doc_ids,
                                     std::span<const int> clusters, std::size_t h, int n_clicks,
                                     const SynthesisParams& params, const std::vector<double>& grid,
                                     const RankingMetric& metric, const ExpansionConfig& expansion,
                                     std::uint64_t seed) {
  params.validate();
  expansion.validate();
  const std::size_t n = geometry.doc_count();
  if (doc_ids.size() != n || clusters.size() != n) {
    throw InputError("adaptive search: ids and clusters must cover every document");
  }
  if (h > geometry.examined_count()) throw InputError("adaptive search: h exceeds the examined count");
  if (n_clicks < 0 || static_cast<std::size_t>(n_clicks) > h) throw InputError("adaptive search: click count outside [0, h]");

  AdaptiveSearchResult result;
  result.candidates = candidate_triples(grid);
  result.scores.assign(result.candidates.size(), 0.0);

  // Cluster key = smallest member id; tables are built and summed in key order.
  std::map<int, std::string> key_of;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] = key_of.emplace(clusters[i], doc_ids[i]);
    if (!fresh && doc_ids[i] < it->second) it->second = doc_ids[i];
  }
  std::map<std::string, int> by_key;
  for (const auto& [c, key] : key_of) by_key.emplace(key, c);

  std::vector<ClusterTable> tables;
  for (const auto& [key, cluster] : by_key) {
    ClusterTable t;
    std::vector<double> p(h);
    for (std::size_t i = 0; i < h; ++i) p[i] = clusters[i] == cluster ? params.p_click_rel : params.p_click_irrel;
    for (int d = 0; d < params.n_synth; ++d) {
      Draw draw;
      std::mt19937_64 crng(synthesis_draw_seed(seed, key, d, kClickStream));
      for (int v : sample_constrained_bernoulli(p, n_clicks, crng)) draw.clicks.push_back(v);
      std::mt19937_64 brng(synthesis_draw_seed(seed, key, d, kBrainStream));
      for (std::size_t i = 0; i < h; ++i) {
        draw.brain.push_back(clusters[i] == cluster ? sample_clamped_normal(params.mu_rel, params.sigma_rel, brng)
                                                    : sample_clamped_normal(params.mu_irrel, params.sigma_irrel, brng));
      }
      t.draws.push_back(std::move(draw));
    }
    for (std::size_t i = h; i < n; ++i) t.truth.push_back(clusters[i] == cluster ? 1 : 0);
    tables.push_back(std::move(t));
  }

  const std::vector<double> pseudo_h(geometry.pseudo().begin(), geometry.pseudo().begin() + static_cast<std::ptrdiff_t>(h));
  std::vector<double> combined, scores, cluster_sum;
  std::vector<int> gains(n - h);
  const double draw_count = static_cast<double>(params.n_synth);
  const double cluster_count = static_cast<double>(tables.size());
  for (std::size_t ci = 0; ci < result.candidates.size(); ++ci) {
    const CombinationWeights& theta = result.candidates[ci];
    double total = 0.0;
    for (const ClusterTable& t : tables) {
      double sum = 0.0;
      for (const Draw& draw : t.draws) {
        combine_into(draw.brain, draw.clicks, pseudo_h, theta, combined);
        geometry.expansion_scores(h, combined, expansion, scores);
        const std::vector<std::size_t> order = stable_descending_order(scores);
        for (std::size_t r = 0; r < order.size(); ++r) gains[r] = t.truth[order[r]];
        sum += metric.evaluate(gains);
      }
      total += sum / draw_count;
    }
    result.scores[ci] = total / cluster_count;
  }

  std::size_t best = 0;
  for (std::size_t ci = 1; ci < result.scores.size(); ++ci) {
    if (result.scores[ci] > result.scores[best]) best = ci;
  }
  result.best = result.candidates[best];
  result.best_score = result.scores[best];
  return result;
}

CombinationWeights adaptive_search(const Scenario& scenario, const ClusterAssignment& assignment,
                                   const SynthesisParams& params, const std::vector<double>& grid,
                                   const RankingMetric& metric, std::uint64_t seed, const AdaptiveQueryContext& ctx) {
  scenario.validate();
  if (ctx.scorer == nullptr) throw InputError("adaptive search: no similarity scorer");
  std::unordered_map<std::string, const Document*> lookup;
  for (const auto& d : ctx.documents) lookup.emplace(d.id, &d);
  std::vector<Document> docs;
  std::vector<std::string> ids;
  std::vector<int> clusters;
  for (const auto* list : {&scenario.examined, &scenario.unseen}) {
    for (const auto& id : *list) {
      const auto it = lookup.find(id);
      if (it == lookup.end()) throw InputError("adaptive search: unknown document '" + id + "'");
      docs.push_back(*it->second);
      ids.push_back(id);
      clusters.push_back(assignment.cluster_of(id));
    }
  }
  const SessionGeometry geometry(ctx.query_embedding, docs, scenario.examined.size(), *ctx.scorer);
  return adaptive_search(geometry, ids, clusters, scenario.examined.size(), scenario.n_clicks, params, grid, metric,
                         ctx.expansion, seed)
      .best;
}

}  // namespace brainrf
