#include "brainrf/pipeline/generator.h"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "brainrf/core/error.h"
#include "brainrf/core/seeding.h"
#include "brainrf/eeg/de_features.h"

namespace brainrf {

std::string to_string(EmissionMode mode) {
  switch (mode) {
    case EmissionMode::Features: return "features";
    case EmissionMode::Scores: return "scores";
    case EmissionMode::Raw: return "raw";
  }
  return "features";
}

EmissionMode parse_emission_mode(const std::string& text) {
  if (text == "features") return EmissionMode::Features;
  if (text == "scores") return EmissionMode::Scores;
  if (text == "raw") return EmissionMode::Raw;
  throw ConfigError("unknown emission mode '" + text + "' (expected features, scores or raw)");
}

namespace {

void check_prob(double p, const std::string& name) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(name + " must lie in [0,1]");
}

void check_distribution(const std::array<double, 4>& d, const std::string& name) {
  double total = 0.0;
  for (double p : d) {
    check_prob(p, name);
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError(name + " must sum to 1");
}

}  // namespace

void GeneratorConfig::validate() const {
  if (users < 1 || sessions < 1 || docs_per_query < 2 || embedding_dim < 2 || latent_dim < 1) {
    throw ConfigError("generator counts must be positive (at least two documents and dimensions)");
  }
  if (cluster_counts.empty()) throw ConfigError("cluster count distribution is empty");
  double total = 0.0;
  for (const auto& [k, p] : cluster_counts) {
    if (k < 1 || k > docs_per_query) throw ConfigError("cluster counts must lie in [1, docs_per_query]");
    check_prob(p, "cluster count probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("cluster count probabilities must sum to 1");
  check_prob(p_relevant_in_cluster, "p_relevant_in_cluster");
  check_prob(p_relevant_out_cluster, "p_relevant_out_cluster");
  check_prob(bad_click_rate, "bad_click_rate");
  check_prob(plain_click_prob, "plain_click_prob");
  check_prob(browse_only_rate, "browse_only_rate");
  if (browse_only_rate >= 1.0 && click_mean > 0.0) throw ConfigError("browse_only_rate of 1 leaves no clicks");
  check_distribution(snippet_grades_relevant, "snippet_grades_relevant");
  check_distribution(snippet_grades_irrelevant, "snippet_grades_irrelevant");
  check_distribution(landing_grades_relevant, "landing_grades_relevant");
  check_distribution(landing_grades_irrelevant, "landing_grades_irrelevant");
  if (!(target_auc > 0.5 && target_auc < 1.0)) throw ConfigError("target_auc must lie in (0.5, 1)");
  if (!(examined_mean >= 1.0) || !(examined_sd >= 0.0)) throw ConfigError("examined mean/sd out of range");
  if (!(click_mean >= 0.0)) throw ConfigError("click_mean must be non-negative");
  if (cluster_spread < 0 || doc_spread < 0 || user_offset < 0 || feature_noise < 0 || separation_gain <= 0) {
    throw ConfigError("generator scales must be non-negative");
  }
  if (emission == EmissionMode::Raw && (raw_rate_hz < 100.0 || raw_post_ms <= 0 || raw_pre_ms < 0)) {
    throw ConfigError("raw emission needs a rate of at least 100 Hz and a positive window");
  }
}

namespace {

using Rng = std::mt19937_64;

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return seed_combine(seed_combine(splitmix64(seed), a), b);
}

std::vector<double> gaussian_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

std::vector<double> unit(std::vector<double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  for (double& x : v) x /= s;
  return v;
}

int draw_grade(const std::array<double, 4>& dist, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (int g = 0; g < 4; ++g) {
    acc += dist[static_cast<std::size_t>(g)];
    if (u < acc) return g + 1;
  }
  for (int g = 3; g >= 0; --g) {
    if (dist[static_cast<std::size_t>(g)] > 0.0) return g + 1;
  }
  return 1;
}

bool coin(double p, Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

std::string padded(const char* prefix, std::size_t v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, v);
  return buf;
}

// Per-session skeleton fixed before the click model is calibrated.
struct Skeleton {
  std::size_t user = 0;
  std::size_t order_in_user = 0;
  std::vector<Document> docs;  // presented order
  std::vector<bool> relevant;
  std::vector<double> query;
  int intent = 0;
  std::size_t examined = 0;
};

// Brain response model shared by all sessions of the cohort.
struct BrainModel {
  std::size_t latent = 0;
  std::vector<double> mixing;  // kFeatureLength x latent
  std::vector<double> baseline;
  std::vector<std::vector<double>> user_direction;
  std::vector<std::vector<double>> user_offset;
  double separation = 0.0;
  double score_separation = 0.0;
};

BrainModel make_brain_model(const GeneratorConfig& c, std::uint64_t seed) {
  Rng rng(stream_seed(seed, 0xB5A1, 0));
  BrainModel m;
  m.latent = static_cast<std::size_t>(c.latent_dim);
  const std::size_t f = eeg::kFeatureLength;
  const double scale = 1.0 / std::sqrt(static_cast<double>(m.latent));
  m.mixing = gaussian_vector(f * m.latent, rng);
  for (double& v : m.mixing) v *= scale;
  m.baseline = gaussian_vector(f, rng);
  for (double& v : m.baseline) v = 1.0 + 0.3 * v;
  const std::vector<double> common = unit(gaussian_vector(m.latent, rng));
  const double phi = c.user_specificity_deg * std::numbers::pi / 180.0;
  for (int u = 0; u < c.users; ++u) {
    std::vector<double> v = gaussian_vector(m.latent, rng);
    double dot = 0.0;
    for (std::size_t i = 0; i < m.latent; ++i) dot += v[i] * common[i];
    for (std::size_t i = 0; i < m.latent; ++i) v[i] -= dot * common[i];
    if (m.latent > 1) v = unit(v);
    std::vector<double> dir(m.latent);
    for (std::size_t i = 0; i < m.latent; ++i) {
      dir[i] = std::cos(phi) * common[i] + (m.latent > 1 ? std::sin(phi) * v[i] : 0.0);
    }
    m.user_direction.push_back(unit(dir));
    const std::vector<double> g = gaussian_vector(m.latent, rng);
    std::vector<double> off(f, 0.0);
    for (std::size_t r = 0; r < f; ++r) {
      for (std::size_t k = 0; k < m.latent; ++k) off[r] += m.mixing[r * m.latent + k] * g[k];
      off[r] *= c.user_offset;
    }
    m.user_offset.push_back(std::move(off));
  }
  const double q = boost::math::quantile(boost::math::normal(), c.target_auc);
  m.score_separation = std::sqrt(2.0) * q;
  m.separation = c.separation_gain * m.score_separation;
  return m;
}

std::vector<double> emit_features(const BrainModel& m, const GeneratorConfig& c, std::size_t user, int label,
                                  Rng& rng) {
  std::normal_distribution<double> g;
  const double s = label != 0 ? 0.5 : -0.5;
  std::vector<double> z(m.latent);
  for (std::size_t k = 0; k < m.latent; ++k) z[k] = s * m.separation * m.user_direction[user][k] + g(rng);
  std::vector<double> x(eeg::kFeatureLength);
  for (std::size_t r = 0; r < x.size(); ++r) {
    double v = m.baseline[r] + m.user_offset[user][r];
    for (std::size_t k = 0; k < m.latent; ++k) v += m.mixing[r * m.latent + k] * z[k];
    x[r] = v + c.feature_noise * g(rng);
  }
  return x;
}

// Posterior probability of relevance given a unit-variance Gaussian response,
// i.e. the output of a perfectly calibrated decoder with the target AUC.
double emit_score(const BrainModel& m, int label, double prior_log_odds, Rng& rng) {
  const double s = label != 0 ? 0.5 : -0.5;
  const double v = s * m.score_separation + std::normal_distribution<double>()(rng);
  return 1.0 / (1.0 + std::exp(-(m.score_separation * v + prior_log_odds)));
}

// Segment whose per-band power follows the DE feature vector: one sinusoid per
// band at the band centre, amplitude chosen so the band entropy tracks the feature.
std::shared_ptr<const eeg::EegSegment> emit_raw(const std::vector<double>& features, const GeneratorConfig& c, Rng& rng) {
  const double rate = c.raw_rate_hz;
  const auto samples = static_cast<std::size_t>(std::llround((c.raw_pre_ms + c.raw_post_ms) * rate / 1000.0));
  auto seg = std::make_shared<eeg::EegSegment>(eeg::kChannelCount, samples, rate, c.raw_pre_ms);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> g;
  const double two_pi_e = 2.0 * std::numbers::pi * std::numbers::e;
  for (std::size_t ch = 0; ch < eeg::kChannelCount; ++ch) {
    auto x = seg->channel(ch);
    for (std::size_t t = 0; t < samples; ++t) x[t] = 0.05 * g(rng);
    for (std::size_t b = 0; b < eeg::kBandCount; ++b) {
      const auto band = eeg::kBands[b];
      const double centre = 0.5 * (band.low_hz + band.high_hz);
      const double variance = std::exp(2.0 * features[ch * eeg::kBandCount + b]) / two_pi_e;
      const double amp = std::sqrt(2.0 * variance);
      const double ph = phase(rng);
      const double w = 2.0 * std::numbers::pi * centre / rate;
      for (std::size_t t = 0; t < samples; ++t) x[t] += amp * std::sin(w * static_cast<double>(t) + ph);
    }
  }
  return seg;
}

}  // namespace

Dataset generate_sessions(const GeneratorConfig& c, std::uint64_t seed) {
  c.validate();
  const auto n_docs = static_cast<std::size_t>(c.docs_per_query);
  const auto dim = static_cast<std::size_t>(c.embedding_dim);
  const auto n_sessions = static_cast<std::size_t>(c.sessions);
  const auto n_users = static_cast<std::size_t>(c.users);

  // Pass 1: documents, intent, relevance, presentation order and examination depth.
  std::vector<Skeleton> skel(n_sessions);
  std::vector<std::size_t> per_user(n_users, 0);
  std::size_t total_examined = 0, relevant_examined = 0;
  for (std::size_t s = 0; s < n_sessions; ++s) {
    Rng rng(stream_seed(seed, s, 1));
    Skeleton& k = skel[s];
    k.user = s % n_users;
    k.order_in_user = per_user[k.user]++;
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    int m = c.cluster_counts.back().first;
    double acc = 0.0;
    for (const auto& [count, p] : c.cluster_counts) {
      acc += p;
      if (u < acc) {
        m = count;
        break;
      }
    }
    const std::vector<double> topic = unit(gaussian_vector(dim, rng));
    std::vector<std::vector<double>> centres;
    for (int j = 0; j < m; ++j) {
      std::vector<double> ctr = gaussian_vector(dim, rng);
      for (std::size_t d = 0; d < dim; ++d) ctr[d] = topic[d] + c.cluster_spread * ctr[d] / std::sqrt(static_cast<double>(dim));
      centres.push_back(unit(ctr));
    }
    std::vector<int> labels(n_docs);
    for (std::size_t i = 0; i < n_docs; ++i) labels[i] = static_cast<int>(i % static_cast<std::size_t>(m));
    std::shuffle(labels.begin(), labels.end(), rng);
    k.intent = std::uniform_int_distribution<int>(0, m - 1)(rng);
    const std::string qid = padded("q", s, 4);
    for (std::size_t i = 0; i < n_docs; ++i) {
      Document d;
      d.id = qid + padded("-d", i, 2);
      std::vector<double> e = gaussian_vector(dim, rng);
      const auto& ctr = centres[static_cast<std::size_t>(labels[i])];
      for (std::size_t t = 0; t < dim; ++t) e[t] = ctr[t] + c.doc_spread * e[t] / std::sqrt(static_cast<double>(dim));
      d.embedding = unit(e);
      d.cluster = labels[i];
      const bool rel = coin(labels[i] == k.intent ? c.p_relevant_in_cluster : c.p_relevant_out_cluster, rng);
      d.external_relevant = rel;
      k.docs.push_back(std::move(d));
      k.relevant.push_back(rel);
    }
    std::vector<double> q = topic;
    const auto& ictr = centres[static_cast<std::size_t>(k.intent)];
    for (std::size_t t = 0; t < dim; ++t) q[t] += c.query_intent_bias * (ictr[t] - topic[t]);
    k.query = unit(q);
    const double depth = std::round(std::normal_distribution<double>(c.examined_mean, c.examined_sd)(rng));
    k.examined = static_cast<std::size_t>(std::clamp(depth, 1.0, static_cast<double>(n_docs - 1)));
    total_examined += k.examined;
    for (std::size_t i = 0; i < k.examined; ++i) relevant_examined += k.relevant[i] ? 1 : 0;
  }

  // Click model calibrated to the realised examination statistics: in clicking
  // sessions relevant and attractive-snippet documents are clicked with p_attr,
  // other documents with plain_click_prob; a share q of irrelevant documents
  // have attractive snippets.
  const double m_hat = static_cast<double>(total_examined) / static_cast<double>(n_sessions);
  const double clicking_mean = c.click_mean / (1.0 - c.browse_only_rate);
  const double r_hat = std::clamp(static_cast<double>(relevant_examined) / static_cast<double>(total_examined), 1e-9, 1.0 - 1e-9);
  const double f = c.bad_click_rate;
  const double p_attr = std::clamp((1.0 - f) * clicking_mean / (m_hat * r_hat), 0.0, 1.0);
  const double p_u = c.plain_click_prob;
  double q_bait = 0.0;
  if (p_attr > p_u) q_bait = std::clamp((f * clicking_mean / (m_hat * (1.0 - r_hat)) - p_u) / (p_attr - p_u), 0.0, 1.0);

  const BrainModel brain = make_brain_model(c, seed);
  const double prior_log_odds = std::log(r_hat / (1.0 - r_hat));

  Dataset ds;
  for (std::size_t s = 0; s < n_sessions; ++s) {
    Rng rng(stream_seed(seed, s, 2));
    Skeleton& k = skel[s];
    Query q;
    q.id = padded("q", s, 4);
    q.embedding = k.query;
    Session sess;
    sess.id = padded("s", s, 4);
    sess.user_id = padded("u", k.user, 2);
    sess.query_id = q.id;
    sess.timestamp = 1'700'000'000 + static_cast<std::int64_t>(k.order_in_user) * 3600 +
                     static_cast<std::int64_t>(k.user);
    sess.intent_cluster = k.intent;
    const bool browse_only = coin(c.browse_only_rate, rng);
    for (std::size_t i = 0; i < n_docs; ++i) {
      q.doc_ids.push_back(k.docs[i].id);
      const bool rel = k.relevant[i];
      const bool bait = !rel && coin(q_bait, rng);
      const int snippet = draw_grade(rel || bait ? c.snippet_grades_relevant : c.snippet_grades_irrelevant, rng);
      const bool clicked = coin(rel || bait ? p_attr : p_u, rng) && !browse_only;
      const int landing = draw_grade(rel ? c.landing_grades_relevant : c.landing_grades_irrelevant, rng);
      if (i >= k.examined) {
        sess.unseen.push_back(k.docs[i].id);
        continue;
      }
      SessionRecord r;
      r.doc_id = k.docs[i].id;
      r.clicked = clicked;
      r.snippet_grade = snippet;
      if (clicked) r.landing_grade = landing;
      auto emit = [&](int grade) {
        BrainInput in;
        const int label = grade >= 2 ? 1 : 0;
        if (c.emission == EmissionMode::Scores) {
          in.score = emit_score(brain, label, prior_log_odds, rng);
        } else {
          std::vector<double> x = emit_features(brain, c, k.user, label, rng);
          if (c.emission == EmissionMode::Raw) {
            in.raw = emit_raw(x, c, rng);
          } else {
            in.features = std::move(x);
          }
        }
        return in;
      };
      r.snippet_brain = emit(snippet);
      if (clicked) r.landing_brain = emit(landing);
      sess.records.push_back(std::move(r));
    }
    ds.queries.push_back(std::move(q));
    for (auto& d : k.docs) ds.documents.push_back(std::move(d));
    ds.sessions.push_back(std::move(sess));
  }
  ds.reindex();
  return ds;
}

CohortStats cohort_stats(const Dataset& dataset) {
  CohortStats st;
  std::size_t examined = 0, bad = 0, no_click = 0, no_click_steps = 0;
  for (const auto& s : dataset.sessions) {
    examined += s.h_max();
    for (const auto& r : s.records) {
      if (r.clicked) break;
      ++no_click_steps;
    }
    const int clicks = s.click_count();
    st.clicks += static_cast<std::size_t>(clicks);
    bad += static_cast<std::size_t>(s.bad_click_count());
    no_click += clicks == 0 ? 1 : 0;
  }
  st.sessions = dataset.sessions.size();
  if (st.sessions == 0) return st;
  const auto n = static_cast<double>(st.sessions);
  st.mean_examined = static_cast<double>(examined) / n;
  st.mean_clicks = static_cast<double>(st.clicks) / n;
  st.bad_click_fraction = st.clicks ? static_cast<double>(bad) / static_cast<double>(st.clicks) : 0.0;
  st.non_click_session_fraction = static_cast<double>(no_click) / n;
  st.non_click_step_fraction = examined ? static_cast<double>(no_click_steps) / static_cast<double>(examined) : 0.0;
  return st;
}

}  // namespace brainrf
