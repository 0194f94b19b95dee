// Acceptance run: one PASS/FAIL line per criterion, details indented below.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "brainrf/adaptive/adaptive_search.h"
#include "brainrf/adaptive/synthesis.h"
#include "brainrf/combiner/combiner.h"
#include "brainrf/core/metrics.h"
#include "brainrf/eeg/de_features.h"
#include "brainrf/eeg/decoder.h"
#include "brainrf/expansion/query_expansion.h"
#include "brainrf/io/cli.h"
#include "brainrf/io/report_io.h"
#include "brainrf/pipeline/decoding.h"
#include "brainrf/pipeline/generator.h"
#include "brainrf/pipeline/harness.h"
#include "brainrf/pipeline/stats.h"
#include "brainrf/signals/signal_scores.h"
#include "brainrf/signals/similarity.h"

using namespace brainrf;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& text) { notes.push_back(text); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Document doc(std::string id, std::vector<double> e) {
  return {std::move(id), std::move(e), std::nullopt, std::nullopt, std::nullopt};
}

std::vector<double> random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> z;
  std::vector<double> v(dim);
  for (double& x : v) x = z(rng);
  normalize_in_place(v);
  return v;
}

// ---------------------------------------------------------------- metrics

double oracle_ndcg(const std::vector<int>& gains, std::size_t k) {
  auto dcg = [k](const std::vector<int>& g) {
    double s = 0.0;
    for (std::size_t r = 1; r <= std::min(k, g.size()); ++r) s += (std::pow(2.0, g[r - 1]) - 1.0) / std::log2(r + 1.0);
    return s;
  };
  std::vector<int> ideal = gains;
  std::sort(ideal.rbegin(), ideal.rend());
  const double idcg = dcg(ideal);
  return idcg == 0.0 ? 1.0 : dcg(gains) / idcg;
}

double oracle_ap(const std::vector<int>& rel) {
  double hits = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < rel.size(); ++i) {
    if (rel[i]) {
      hits += 1.0;
      sum += hits / static_cast<double>(i + 1);
    }
  }
  return hits == 0.0 ? 0.0 : sum / hits;
}

double oracle_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[i] != 1 || y[j] != 0) continue;
      den += 1.0;
      num += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
    }
  }
  return num / den;
}

Outcome metric_oracles() {
  Outcome o;
  double worst = 0.0;
  std::size_t cases = 0;
  auto check_list = [&](const std::vector<int>& g, const std::vector<double>& scores) {
    for (std::size_t k = 1; k <= g.size() + 2; ++k) worst = std::max(worst, std::abs(ndcg_at_k(g, k) - oracle_ndcg(g, k)));
    std::vector<int> rel(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) rel[i] = g[i] >= 1;
    worst = std::max(worst, std::abs(average_precision(rel) - oracle_ap(rel)));
    const bool both = std::count(rel.begin(), rel.end(), 1) > 0 && std::count(rel.begin(), rel.end(), 0) > 0;
    if (both) worst = std::max(worst, std::abs(auc(scores, rel) - oracle_auc(scores, rel)));
    ++cases;
  };
  // Every grade sequence of length 1..5 over {0..3} covers every permutation.
  for (std::size_t len = 1; len <= 5; ++len) {
    std::vector<int> g(len, 0);
    for (;;) {
      std::vector<double> rank_scores(len);
      for (std::size_t i = 0; i < len; ++i) rank_scores[i] = static_cast<double>(len - i);
      check_list(g, rank_scores);
      std::size_t i = 0;
      while (i < len && g[i] == 3) g[i++] = 0;
      if (i == len) break;
      ++g[i];
    }
  }
  const std::size_t exhaustive = cases;
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<int> g(n);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = static_cast<int>(rng() % 4);
      s[i] = static_cast<double>(rng() % 12) / 12.0;  // ties included
    }
    check_list(g, s);
  }
  o.note(fmt("%zu exhaustive lists, %zu random lists, largest deviation %.3g", exhaustive, cases - exhaustive, worst));
  o.require(worst <= 1e-12, "deviation above 1e-12");
  return o;
}

// ------------------------------------------------------------ formulas

Outcome formula_fidelity() {
  Outcome o;
  auto sv = [](const std::vector<double>& v) {
    ScoreVector s;
    for (std::size_t i = 0; i < v.size(); ++i) s.push("d" + std::to_string(i), v[i]);
    return s;
  };
  const double fused = combine(sv({0.5}), sv({1.0}), sv({0.7}), {0.6, 0.2, 0.2})[0].score;
  o.require(std::abs(fused - 0.64) <= 1e-9, fmt("fusion 0.64, got %.12f", fused));

  const std::vector<ExaminationRecord> clicked{{"a", true, 0.8, 0.2}}, skipped{{"b", false, 0.8, std::nullopt}};
  o.require(brain_scores_select(clicked, RfMode::Iterative)[0].score == 0.8, "iterative brain score uses the snippet");
  o.require(brain_scores_select(clicked, RfMode::Retrospective)[0].score == 0.2,
            "retrospective brain score uses the landing page");
  o.require(brain_scores_select(skipped, RfMode::Retrospective)[0].score == 0.8,
            "retrospective brain score falls back to the snippet");

  const auto w = softmax_weights(std::vector<double>{1.0, 0.0});
  const double e = std::numbers::e;
  o.require(std::abs(w[0] - e / (e + 1.0)) <= 1e-9 && std::abs(w[1] - 1.0 / (e + 1.0)) <= 1e-9, "softmax [1, 0]");
  const auto even = softmax_weights(std::vector<double>{0.5, 0.5});
  o.require(std::abs(even[0] - 0.5) <= 1e-9 && std::abs(even[1] - 0.5) <= 1e-9, "softmax [0.5, 0.5]");
  o.require(softmax_weights(std::vector<double>{3.7})[0] == 1.0, "softmax of one score");

  // One feedback document with similarity 0.64 to the unseen one, query similarity 0.5.
  const CosineScorer scorer;
  const double cos_f = 2.0 * 0.64 - 1.0;
  const auto out = expand_and_score(std::vector<double>{1.0, 0.0, 0.0},
                                    std::vector<Document>{doc("f", {0.0, cos_f, std::sqrt(1.0 - cos_f * cos_f)})},
                                    std::vector<double>{1.0}, std::vector<Document>{doc("u", {0.0, 1.0, 0.0})}, scorer,
                                    ExpansionConfig{10, 0.1});
  o.require(std::abs(out.scores[0].score - 0.514) <= 1e-9, fmt("trade-off 0.514, got %.12f", out.scores[0].score));

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u;
  int collapsed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 4 + rng() % 8, h = 1 + rng() % 10, m = 2 + rng() % 15;
    const auto q = random_unit(rng, dim);
    std::vector<Document> examined, unseen;
    ScoreVector combined, pseudo;
    for (std::size_t i = 0; i < h; ++i) {
      examined.push_back(doc("e" + std::to_string(i), random_unit(rng, dim)));
      combined.push(examined.back().id, 2.0 * u(rng));
    }
    for (std::size_t i = 0; i < m; ++i) {
      unseen.push_back(doc("u" + std::to_string(i), random_unit(rng, dim)));
      pseudo.push(unseen.back().id, scorer.score(q, unseen.back().embedding));
    }
    const auto r = rerank_unseen(q, examined, combined, unseen, scorer, ExpansionConfig{10, 0.0});
    if (RankedList::from_scores(r.scores).ids() == RankedList::from_scores(pseudo).ids()) ++collapsed;
  }
  o.note(fmt("c = 0 reproduced the pseudo ordering on %d of 100 toys", collapsed));
  o.require(collapsed == 100, "c = 0 ordering differs from the pseudo ordering");
  return o;
}

// ------------------------------------------------------------ decoder

struct Blobs {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
};

Blobs make_blobs(std::size_t n, std::size_t dim, double half_gap, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Blobs b;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    std::vector<double> v(dim);
    for (double& e : v) e = z(rng) + (label ? half_gap : -half_gap);
    b.x.push_back(std::move(v));
    b.y.push_back(label);
  }
  return b;
}

double model_auc(const eeg::DecoderModel& m, const Blobs& b) {
  std::vector<double> p;
  for (const auto& v : b.x) p.push_back(m.predict(v));
  return auc(p, b.y);
}

Outcome decoder_sanity() {
  Outcome o;
  const auto sep = eeg::train_decoder(make_blobs(200, eeg::kFeatureLength, 1.5, 10).x,
                                      make_blobs(200, eeg::kFeatureLength, 1.5, 10).y);
  const double held_out = model_auc(sep, make_blobs(200, eeg::kFeatureLength, 1.5, 11));
  o.require(held_out >= 0.95, fmt("separable held-out AUC %.4f", held_out));

  Blobs noise = make_blobs(400, eeg::kFeatureLength, 0.0, 12);
  std::shuffle(noise.y.begin(), noise.y.end(), std::mt19937_64(14));
  const auto shuffled = eeg::train_decoder(noise.x, noise.y);
  const double chance = model_auc(shuffled, make_blobs(400, eeg::kFeatureLength, 0.0, 13));
  o.require(chance >= 0.40 && chance <= 0.60, fmt("shuffled-label AUC %.4f", chance));

  std::mt19937_64 rng(2);
  std::normal_distribution<double> z;
  std::vector<double> x(200000);
  for (double& v : x) v = z(rng);
  const double de = eeg::differential_entropy(x);
  const double want = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
  o.require(std::abs(de - want) <= 0.01 * want, fmt("white-noise DE %.5f vs %.5f", de, want));

  eeg::EegSegment seg(eeg::kChannelCount, 1000, 500.0, 0.0);
  for (double& v : seg.data()) v = z(rng);
  eeg::EegSegment doubled = seg;
  for (double& v : doubled.data()) v *= 2.0;
  const auto f0 = eeg::extract_de(seg).flat(), f1 = eeg::extract_de(doubled).flat();
  double worst = 0.0;
  for (std::size_t i = 0; i < f0.size(); ++i) worst = std::max(worst, std::abs(f1[i] - f0[i] - std::log(2.0)));
  o.require(worst <= 1e-3, fmt("amplitude doubling shift off by %.3g", worst));
  o.note(fmt("held-out AUC %.4f, shuffled AUC %.4f, DE %.5f (target %.5f), doubling error %.2g", held_out, chance, de,
             want, worst));
  return o;
}

// ------------------------------------------------------------ time split

Outcome split_integrity() {
  Outcome o;
  GeneratorConfig g;
  g.users = 3;
  g.sessions = 60;
  g.emission = EmissionMode::Features;
  const Dataset ds = generate_sessions(g, 7);
  DecodingConfig cfg;
  cfg.threads = 1;
  const DecodingResult base = decode_brain_scores(ds, cfg, 7);

  std::size_t switched_users = 0, checked = 0;
  for (const auto& [user, order] : ds.sessions_by_user()) {
    std::size_t own = 0;
    bool seen_personal = false;
    for (std::size_t s : order) {
      const bool personal = base.sessions[s].scope == eeg::DecoderScope::Personalized;
      if (personal != (own >= eeg::kPersonalizationThreshold))
        o.require(false, "user " + user + " switched at " + std::to_string(own) + " samples");
      seen_personal = seen_personal || personal;
      for (const auto& rec : ds.sessions[s].records) {
        if (rec.snippet_grade) ++own;
        if (rec.landing_grade && rec.landing_brain.present()) ++own;
      }
    }
    if (seen_personal) ++switched_users;

    // Sentinel: invert grades and distort features from the middle session onwards.
    const std::size_t cut = order.size() / 2;
    Dataset poisoned = ds;
    for (std::size_t i = cut; i < order.size(); ++i) {
      for (auto& rec : poisoned.sessions[order[i]].records) {
        if (rec.snippet_grade) rec.snippet_grade = 5 - *rec.snippet_grade;
        if (rec.landing_grade) rec.landing_grade = 5 - *rec.landing_grade;
        for (auto* b : {&rec.snippet_brain, &rec.landing_brain})
          if (b->features)
            for (double& v : *b->features) v = -3.0 * v + 1.0;
      }
    }
    poisoned.reindex();
    const DecodingResult after = decode_brain_scores(poisoned, cfg, 7);
    for (std::size_t i = 0; i < cut; ++i) {
      ++checked;
      if (after.sessions[order[i]].snippet != base.sessions[order[i]].snippet ||
          after.sessions[order[i]].landing != base.sessions[order[i]].landing)
        o.require(false, "future data changed session " + ds.sessions[order[i]].id);
    }
  }
  o.require(switched_users > 0, "no user reached the personalization threshold");
  o.note(fmt("%zu past sessions unchanged under sentinel perturbation; %zu users switched at exactly %zu samples",
             checked, switched_users, eeg::kPersonalizationThreshold));
  return o;
}

// ------------------------------------------------------------ synthesis

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Mean of min(max(N(mu, sigma), 0), 1).
double clamped_normal_mean(double mu, double sigma) {
  const double a = (0.0 - mu) / sigma, b = (1.0 - mu) / sigma;
  return mu * (normal_cdf(b) - normal_cdf(a)) + sigma * (normal_pdf(a) - normal_pdf(b)) + (1.0 - normal_cdf(b));
}

Outcome synthesis_correctness() {
  Outcome o;
  // Six examined documents, three in the assumed cluster.
  std::vector<std::string> ids{"a", "b", "c", "d", "e", "f"};
  const ClusterAssignment assignment(ids, {0, 1, 0, 1, 0, 1});
  SynthesisParams params;
  params.p_click_rel = 0.6;
  params.p_click_irrel = 0.1;

  std::mt19937_64 rng(31);
  bool sums_ok = true;
  for (int d = 0; d < 10000; ++d) {
    const int n = static_cast<int>(rng() % 7);
    const Scenario sc{ids, {}, n};
    const auto v = synth_clicks(sc, assignment, static_cast<int>(rng() % 2), params, rng()).unmasked_scores();
    sums_ok = sums_ok && std::accumulate(v.begin(), v.end(), 0.0) == n;
  }
  o.require(sums_ok, "a synthesized click vector missed its click count");

  std::vector<unsigned> outcomes;
  std::vector<double> expected;
  for (unsigned m = 0; m < 64; ++m) {
    if (std::popcount(m) != 2) continue;
    double pr = 1.0;
    for (std::size_t i = 0; i < 6; ++i) {
      const double p = assignment.cluster_of(ids[i]) == 0 ? params.p_click_rel : params.p_click_irrel;
      pr *= (m >> i) & 1u ? p : 1.0 - p;
    }
    outcomes.push_back(m);
    expected.push_back(pr);
  }
  const double z = std::accumulate(expected.begin(), expected.end(), 0.0);
  constexpr int draws = 10000;
  for (double& e : expected) e = e / z * draws;
  std::vector<double> observed(outcomes.size(), 0.0);
  const Scenario two{ids, {}, 2};
  for (int d = 0; d < draws; ++d) {
    const auto v = synth_clicks(two, assignment, 0, params, synthesis_draw_seed(5, "a", d, kClickStream));
    unsigned m = 0;
    for (std::size_t i = 0; i < 6; ++i) m |= (v[i].score == 1.0 ? 1u : 0u) << i;
    const auto it = std::find(outcomes.begin(), outcomes.end(), m);
    if (it == outcomes.end()) {
      o.require(false, "infeasible click outcome");
      break;
    }
    observed[static_cast<std::size_t>(it - outcomes.begin())] += 1.0;
  }
  const TestResult chi = chi_square_test(observed, expected);
  o.require(chi.p_value > 0.01, fmt("chi-square p %.4f", chi.p_value));

  double worst = 0.0;
  for (auto [mu, sigma] : {std::pair{0.65, 0.15}, {0.35, 0.15}, {0.8, 0.4}, {0.1, 0.5}}) {
    SynthesisParams p;
    p.mu_rel = mu;
    p.sigma_rel = sigma;
    double sum = 0.0;
    int count = 0;
    for (int d = 0; d < 3000; ++d) {
      const auto v = synth_brain(Scenario{ids, {}, 0}, assignment, 0, p, synthesis_draw_seed(9, "a", d, kBrainStream));
      for (const auto& e : v.entries()) {
        if (assignment.cluster_of(e.doc_id) != 0) continue;
        sum += e.score;
        ++count;
      }
    }
    worst = std::max(worst, std::abs(sum / count - clamped_normal_mean(mu, sigma)));
  }
  o.require(worst <= 0.01, fmt("clamped Normal mean off by %.4f", worst));
  o.note(fmt("10^4 click sums exact; 15-outcome chi-square %.2f (p %.3f); clamped mean error %.4f", chi.statistic,
             chi.p_value, worst));
  return o;
}

// ------------------------------------------------------------ adaptive search

struct Toy {
  std::vector<double> query;
  std::vector<Document> docs;
  std::vector<int> labels;
};

Toy make_toy(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  const int clusters = 2 + static_cast<int>(rng() % 3);
  const std::size_t per = 3 + rng() % 3, dim = 8;
  std::vector<std::vector<double>> centres;
  for (int c = 0; c < clusters; ++c) centres.push_back(random_unit(rng, dim));
  Toy t;
  t.query = random_unit(rng, dim);
  std::vector<std::pair<std::string, int>> order;
  for (int c = 0; c < clusters; ++c)
    for (std::size_t i = 0; i < per; ++i) order.emplace_back("c" + std::to_string(c) + "d" + std::to_string(i), c);
  std::shuffle(order.begin(), order.end(), rng);
  for (const auto& [id, c] : order) {
    std::vector<double> v(dim);
    for (std::size_t d = 0; d < dim; ++d) v[d] = centres[c][d] + 0.3 * z(rng);
    normalize_in_place(v);
    t.docs.push_back(doc(id, v));
    t.labels.push_back(c);
  }
  return t;
}

// Independent sweep: every grid triple scored through the document-level API.
std::pair<CombinationWeights, std::vector<double>> exhaustive_sweep(const Toy& t, std::size_t h, int n_clicks,
                                                                    const SynthesisParams& params,
                                                                    const std::vector<double>& grid, std::uint64_t seed) {
  const CosineScorer scorer;
  std::vector<std::string> ids;
  for (const auto& d : t.docs) ids.push_back(d.id);
  const ClusterAssignment a(ids, t.labels);
  Scenario sc;
  for (std::size_t i = 0; i < ids.size(); ++i) (i < h ? sc.examined : sc.unseen).push_back(ids[i]);
  sc.n_clicks = n_clicks;
  const std::vector<Document> examined(t.docs.begin(), t.docs.begin() + static_cast<std::ptrdiff_t>(h));
  const std::vector<Document> unseen(t.docs.begin() + static_cast<std::ptrdiff_t>(h), t.docs.end());
  const ScoreVector pseudo = pseudo_scores(t.query, examined, scorer);
  std::map<int, std::string> key;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (!key.count(t.labels[i]) || ids[i] < key[t.labels[i]]) key[t.labels[i]] = ids[i];

  std::vector<CombinationWeights> triples;
  for (double b : grid)
    for (double c : grid)
      for (double p : grid)
        if (b + c + p > 0.0) triples.push_back({b, c, p});

  std::vector<double> scores;
  for (const auto& theta : triples) {
    double total = 0.0;
    for (const auto& [cluster, cluster_key] : key) {
      const auto truth = cluster_ground_truth(sc.unseen, a, cluster);
      std::unordered_map<std::string, int> grades;
      for (std::size_t i = 0; i < sc.unseen.size(); ++i) grades[sc.unseen[i]] = truth[i];
      double sum = 0.0;
      for (int d = 0; d < params.n_synth; ++d) {
        const ScoreVector clicks =
            synth_clicks(sc, a, cluster, params, synthesis_draw_seed(seed, cluster_key, d, kClickStream));
        const ScoreVector brain = synth_brain(sc, a, cluster, params, synthesis_draw_seed(seed, cluster_key, d, kBrainStream));
        const auto out = rerank_unseen(t.query, examined, combine(brain, clicks, pseudo, theta), unseen, scorer,
                                       ExpansionConfig{10, 0.1});
        sum += ndcg_at_k(RankedList::from_scores(out.scores), grades, 10);
      }
      total += sum / params.n_synth;
    }
    scores.push_back(total / static_cast<double>(key.size()));
  }
  const double top = *std::max_element(scores.begin(), scores.end());
  CombinationWeights best{};
  bool found = false;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    if (scores[i] < top - 1e-12) continue;
    const auto& w = triples[i];
    if (!found || std::tie(w.brain, w.click, w.pseudo) < std::tie(best.brain, best.click, best.pseudo)) best = w;
    found = true;
  }
  return {best, scores};
}

Outcome adaptive_exactness() {
  Outcome o;
  const auto grid = default_weight_grid();
  int agree = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Toy t = make_toy(1000 + seed);
    const std::size_t h = 1 + seed % (t.docs.size() - 2);
    const int clicks = static_cast<int>(seed % (std::min<std::size_t>(h, 3) + 1));
    SynthesisParams params;
    params.n_synth = 10;
    std::vector<std::string> ids;
    for (const auto& d : t.docs) ids.push_back(d.id);
    const CosineScorer scorer;
    const SessionGeometry geometry(t.query, t.docs, h, scorer);
    const auto run = [&] {
      return adaptive_search(geometry, ids, t.labels, h, clicks, params, grid, RankingMetric{}, ExpansionConfig{10, 0.1},
                             seed);
    };
    const AdaptiveSearchResult r1 = run(), r2 = run();
    const auto [best, oracle] = exhaustive_sweep(t, h, clicks, params, grid, seed);
    if (r1.candidates.size() != 215 || oracle.size() != 215) {
      o.require(false, "candidate count is not 215");
      continue;
    }
    for (std::size_t i = 0; i < 215; ++i) worst = std::max(worst, std::abs(r1.scores[i] - oracle[i]));
    if (r1.best == best) ++agree;
    else o.require(false, fmt("seed %llu: search and sweep disagree", static_cast<unsigned long long>(seed)));
    const bool bitwise = r1.best == r2.best && r1.scores.size() == r2.scores.size() &&
                         std::equal(r1.scores.begin(), r1.scores.end(), r2.scores.begin(), [](double a, double b) {
                           return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
                         });
    o.require(bitwise, fmt("seed %llu not bit-reproducible", static_cast<unsigned long long>(seed)));
  }
  o.require(worst <= 1e-12, fmt("candidate scores deviate by %.3g", worst));
  o.note(fmt("%d of 20 scenarios returned the sweep's argmax; largest score deviation %.3g", agree, worst));
  return o;
}

// ------------------------------------------------------------ directional replication

struct Gains {
  std::vector<double> target, other, all;
};

// Paired gain of `with` over `without` on ndcg@10, split by the row predicate.
Gains paired_gains(const ExperimentReport& r, RfMode mode, const std::string& with, const std::string& without,
                   const std::function<bool(const ReportRow&)>& in_target) {
  const auto a = r.rows_of(mode, with), b = r.rows_of(mode, without);
  const std::size_t m = r.metric_index("ndcg@10");
  Gains g;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i]->session_id != b[i]->session_id || a[i]->h != b[i]->h) throw std::runtime_error("rows are not aligned");
    const double d = a[i]->metrics[m] - b[i]->metrics[m];
    g.all.push_back(d);
    (in_target(*a[i]) ? g.target : g.other).push_back(d);
  }
  return g;
}

TestResult one_sample(const std::vector<double>& d) { return paired_t_test(d, std::vector<double>(d.size(), 0.0)); }

bool directional(Outcome& o, const std::string& label, const std::vector<double>& d, double mean_with,
                 double mean_without) {
  const TestResult t = one_sample(d);
  const bool ok = t.mean_difference > 0.0 && t.p_value < 0.05;
  o.note(fmt("(%s) %.4f vs %.4f, gain %+.4f, paired t %.2f, p %.2g, n %zu: %s", label.c_str(), mean_with, mean_without,
             t.mean_difference, t.statistic, t.p_value, d.size(), ok ? "holds" : "not reproduced"));
  return ok;
}

double mean_of(const ExperimentReport& r, RfMode mode, const std::string& method) {
  return mean(r.column(mode, method, r.metric_index("ndcg@10")));
}

Outcome directional_replication() {
  Outcome o;
  constexpr std::uint64_t seed = 1;
  const Dataset ds = generate_sessions(GeneratorConfig{}, seed);
  HarnessConfig cfg;
  cfg.irf_methods = {{"fixed", MethodKind::Fixed, {0.6, 0.2, 0.2}}, {"nobrain", MethodKind::Fixed, {0.0, 0.2, 0.2}}};
  cfg.rrf_methods = {{"fixed", MethodKind::Fixed, {1.0, 0.4, 0.06}}, {"nobrain", MethodKind::Fixed, {0.0, 0.4, 0.06}}};
  const DecodingResult decoded = decode_brain_scores(ds, cfg.decoding, seed);

  const CohortStats st = cohort_stats(ds);
  const DecodingQuality q = evaluate_decoding(ds, decoded);
  const double cohort_auc = q.snippet_auc.value_or(0.0);
  o.note(fmt("cohort: %zu sessions, decoder AUC %.3f, bad clicks %.1f%%, %.2f examined, %.2f clicks", st.sessions,
             cohort_auc, 100.0 * st.bad_click_fraction, st.mean_examined, st.mean_clicks));
  o.require(std::abs(cohort_auc - 0.69) <= 0.03, "decoder AUC outside 0.69 +- 0.03");

  const ExperimentReport irf = run_adaptive_irf(ds, decoded, cfg, seed);
  const ExperimentReport rrf = run_rrf(ds, decoded, cfg, seed);

  const auto no_click = [](const ReportRow& r) { return r.n_clicks == 0; };
  const auto bad_click = [](const ReportRow& r) { return r.n_bad_clicks > 0; };
  const Gains gi = paired_gains(irf, RfMode::Iterative, "fixed", "nobrain", no_click);
  const Gains gr = paired_gains(rrf, RfMode::Retrospective, "fixed", "nobrain", bad_click);
  const Gains ga = paired_gains(irf, RfMode::Iterative, "adaptive", "fixed", no_click);

  const bool a = directional(o, "a", gi.all, mean_of(irf, RfMode::Iterative, "fixed"),
                             mean_of(irf, RfMode::Iterative, "nobrain"));
  bool b = directional(o, "b", gr.all, mean_of(rrf, RfMode::Retrospective, "fixed"),
                       mean_of(rrf, RfMode::Retrospective, "nobrain"));
  const double irf_margin = mean(gi.all), rrf_margin = mean(gr.all);
  o.note(fmt("    retrospective margin %.4f vs iterative margin %.4f", rrf_margin, irf_margin));
  b = b && rrf_margin > irf_margin;
  const bool c = directional(o, "c", ga.all, mean_of(irf, RfMode::Iterative, "adaptive"),
                             mean_of(irf, RfMode::Iterative, "fixed"));

  // (d): brain gain within the target rows must be significant and exceed the gain elsewhere.
  auto concentrated = [&](const char* name, const Gains& g) {
    const TestResult within = one_sample(g.target);
    const TestResult between = welch_t_test(g.target, g.other);
    const bool ok = within.p_value < 0.05 && within.mean_difference > 0.0 && mean(g.target) > mean(g.other);
    o.note(fmt("(d) %s: target gain %.4f (n %zu, within p %.2g) vs other %.4f (n %zu), Welch p %.2g: %s", name,
               mean(g.target), g.target.size(), within.p_value, mean(g.other), g.other.size(), between.p_value,
               ok ? "holds" : "not reproduced"));
    return ok;
  };
  const bool d_irf = concentrated("iterative, rows without clicks", gi);
  const bool d_rrf = concentrated("retrospective, sessions with a bad click", gr);

  // Supplementary breakdown of the retrospective gain by bad-click count.
  std::map<std::string, std::vector<double>> by_group;
  const auto fa = rrf.rows_of(RfMode::Retrospective, "fixed");
  for (std::size_t i = 0; i < fa.size(); ++i) {
    const auto& r = *fa[i];
    const std::string group = r.n_clicks == 0          ? "no clicks"
                              : r.n_bad_clicks == 0   ? "good clicks only"
                              : r.n_bad_clicks == 1   ? "one bad click"
                                                      : "two or more bad clicks";
    by_group[group].push_back(gr.all[i]);
  }
  std::string line = "    retrospective gain by session type:";
  for (const auto& [group, v] : by_group) line += fmt(" %s %.4f (n %zu);", group.c_str(), mean(v), v.size());
  o.note(line);

  o.require(a, "(a) iterative brain gain");
  o.require(b, "(b) retrospective brain gain larger than iterative");
  o.require(c, "(c) adaptive over fixed weights");
  o.require(d_irf && d_rrf, "(d) gain concentration");
  return o;
}

// ------------------------------------------------------------ CLI reproducibility

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "brainrf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return io::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome cli_reproducibility() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / ("brainrf_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  for (const char* run : {"one", "two"}) {
    const fs::path dir = root / run;
    const std::string data = (dir / "data").string();
    o.require(cli({"synth", "--out", data, "--users", "3", "--sessions", "60", "--emission", "features", "--seed", "5"}) == 0,
              "synth failed");
    o.require(cli({"run-irf", "--data", data, "--out", (dir / "irf.tsv").string(), "--seed", "5", "--ablate-brain"}) == 0,
              "run-irf failed");
    o.require(cli({"run-rrf", "--data", data, "--out", (dir / "rrf.tsv").string(), "--seed", "5", "--ablate-brain"}) == 0,
              "run-rrf failed");
  }
  std::size_t bytes = 0;
  for (const char* f : {"irf.tsv", "irf.summary.json", "rrf.tsv", "rrf.summary.json"}) {
    const std::string a = slurp(root / "one" / f), b = slurp(root / "two" / f);
    o.require(!a.empty() && a == b, std::string(f) + " differs between invocations");
    bytes += a.size();
  }
  double worst = 0.0;
  for (const char* f : {"irf", "rrf"}) {
    const io::ReportTable t = io::read_report_tsv(root / "one" / (std::string(f) + ".tsv"));
    const auto agg = io::aggregate_rows(t.rows, t.metric_names.size());
    const auto summary = nlohmann::json::parse(slurp(root / "one" / (std::string(f) + ".summary.json")));
    const auto& stored = summary.at("aggregates");
    if (stored.size() != agg.size()) {
      o.require(false, std::string(f) + ": aggregate count differs");
      continue;
    }
    for (std::size_t i = 0; i < agg.size(); ++i) {
      o.require(stored[i].at("method") == agg[i].method && stored[i].at("rows") == agg[i].rows,
                std::string(f) + ": aggregate rows differ");
      for (std::size_t m = 0; m < t.metric_names.size(); ++m)
        worst = std::max(worst, std::abs(stored[i].at("means").at(t.metric_names[m]).get<double>() - agg[i].means[m]));
    }
  }
  o.require(worst <= 1e-12, fmt("aggregates deviate from row means by %.3g", worst));
  o.note(fmt("%zu report bytes identical across two invocations; aggregate deviation %.3g", bytes, worst));
  fs::remove_all(root);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget_s;
    Outcome (*run)();
  };
  const std::vector<Criterion> criteria{
      {1, "metric oracles", 10.0, metric_oracles},
      {2, "fusion and expansion formulas", 0.0, formula_fidelity},
      {3, "decoder sanity", 60.0, decoder_sanity},
      {4, "split-by-timepoint integrity", 0.0, split_integrity},
      {5, "synthesis correctness", 0.0, synthesis_correctness},
      {6, "adaptive search exactness", 300.0, adaptive_exactness},
      {7, "directional replication", 900.0, directional_replication},
      {8, "CLI reproducibility", 0.0, cli_reproducibility},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0) o.require(secs < c.budget_s, fmt("runtime %.1f s over the %.0f s budget", secs, c.budget_s));
    if (!o.pass) ++failures;
    std::printf("criterion %d %s: %s (%.1f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.title, secs);
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
