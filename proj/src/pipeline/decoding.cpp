#include "brainrf/pipeline/decoding.h"

#include <algorithm>
#include <map>
#include <random>

#include "brainrf/core/error.h"
#include "brainrf/core/metrics.h"
#include "brainrf/core/seeding.h"
#include "brainrf/eeg/de_features.h"
#include "brainrf/pipeline/parallel.h"

namespace brainrf {

namespace {

constexpr double kColdStartScore = 0.5;

struct Sample {
  const std::vector<double>* features;
  int label;
};

// Resolved features of every record, parallel to the dataset's sessions.
struct SessionFeatures {
  std::vector<std::optional<std::vector<double>>> snippet;
  std::vector<std::optional<std::vector<double>>> landing;
};

std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return seed_combine(splitmix64(a), b); }

std::uint64_t hash_text(const std::string& s) { return fnv1a(s); }

void append_samples(const Session& s, const SessionFeatures& f, std::vector<Sample>& out) {
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    const auto& r = s.records[i];
    if (f.snippet[i] && r.snippet_grade) {
      out.push_back({&*f.snippet[i], eeg::binarize_grade(RelevanceGrade(*r.snippet_grade))});
    }
    if (f.landing[i] && r.landing_grade) {
      out.push_back({&*f.landing[i], eeg::binarize_grade(RelevanceGrade(*r.landing_grade))});
    }
  }
}

bool both_classes(const std::vector<Sample>& samples) {
  bool pos = false, neg = false;
  for (const auto& s : samples) (s.label != 0 ? pos : neg) = true;
  return pos && neg;
}

eeg::DecoderModel train_on(const std::vector<Sample>& samples, const eeg::DecoderConfig& cfg, eeg::DecoderScope scope) {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  x.reserve(samples.size());
  for (const auto& s : samples) {
    x.push_back(*s.features);
    y.push_back(s.label);
  }
  return eeg::train_decoder(x, y, cfg, scope);
}

}  // namespace

std::optional<std::vector<double>> resolve_features(const BrainInput& input, const eeg::PreprocessConfig& config) {
  if (input.features) return input.features;
  if (input.raw) return eeg::extract_de(eeg::preprocess(*input.raw, config)).flat();
  return std::nullopt;
}

DecodingResult decode_brain_scores(const Dataset& dataset, const DecodingConfig& config, std::uint64_t seed) {
  if (config.personalization_threshold == 0) throw ConfigError("personalization threshold must be positive");
  if (config.retrain_every == 0) throw ConfigError("retrain cadence must be at least one session");
  const auto& sessions = dataset.sessions;
  std::vector<SessionFeatures> features(sessions.size());
  for (std::size_t s = 0; s < sessions.size(); ++s) {
    for (const auto& r : sessions[s].records) {
      features[s].snippet.push_back(r.snippet_brain.score ? std::nullopt
                                                          : resolve_features(r.snippet_brain, config.preprocess));
      features[s].landing.push_back(r.landing_brain.score ? std::nullopt
                                                          : resolve_features(r.landing_brain, config.preprocess));
    }
  }

  const auto users = dataset.sessions_by_user();
  DecodingResult result;
  result.sessions.resize(sessions.size());
  std::vector<DecodingSummary> per_user(users.size());

  auto run_user = [&](std::size_t u) {
    const auto& [user, order] = users[u];
    DecodingSummary& summary = per_user[u];

    std::vector<Sample> others;
    for (std::size_t v = 0; v < users.size(); ++v) {
      if (v == u) continue;
      for (std::size_t s : users[v].second) append_samples(sessions[s], features[s], others);
    }
    if (others.size() > config.generalized_sample_cap) {
      std::mt19937_64 rng(mix(seed, hash_text(user)));
      std::shuffle(others.begin(), others.end(), rng);
      others.resize(config.generalized_sample_cap);
    }
    eeg::DecoderModel generalized;
    if (!others.empty() && both_classes(others)) {
      eeg::DecoderConfig cfg = config.svm;
      cfg.seed = mix(seed, hash_text("generalized:" + user));
      generalized = train_on(others, cfg, eeg::DecoderScope::Generalized);
    }

    std::vector<Sample> own;
    eeg::DecoderModel personalized;
    std::size_t since_training = 0;
    for (std::size_t s : order) {
      const Session& session = sessions[s];
      const SessionFeatures& f = features[s];
      SessionBrainScores& out = result.sessions[s];

      const std::size_t count = own.size();
      if (count >= config.personalization_threshold && both_classes(own) &&
          (!personalized.trained() || since_training + 1 >= config.retrain_every)) {
        eeg::DecoderConfig cfg = config.svm;
        cfg.seed = mix(seed, hash_text("personalized:" + session.id));
        personalized = train_on(own, cfg, eeg::DecoderScope::Personalized);
        ++summary.personalized_trainings;
        since_training = 0;
      } else {
        ++since_training;
      }
      const eeg::DecoderModel* model = &eeg::select_model(generalized, personalized, count);
      if (!model->trained()) model = generalized.trained() ? &generalized : nullptr;

      bool needed_model = false;
      for (std::size_t i = 0; i < session.records.size(); ++i) {
        const auto& r = session.records[i];
        if (r.snippet_brain.score) {
          out.snippet.push_back(*r.snippet_brain.score);
        } else if (f.snippet[i]) {
          needed_model = true;
          out.snippet.push_back(model ? model->predict(*f.snippet[i]) : kColdStartScore);
        } else {
          throw InputError("session '" + session.id + "' has no brain response for '" + r.doc_id + "'");
        }
        if (r.landing_brain.score) {
          out.landing.push_back(*r.landing_brain.score);
        } else if (f.landing[i]) {
          needed_model = true;
          out.landing.push_back(model ? model->predict(*f.landing[i]) : kColdStartScore);
        } else {
          out.landing.push_back(std::nullopt);
        }
      }
      if (!needed_model) {
        ++summary.ingested_sessions;
      } else if (model == nullptr) {
        out.cold_start = true;
        ++summary.cold_start_sessions;
      } else {
        out.scope = model->scope();
        ++(model->scope() == eeg::DecoderScope::Personalized ? summary.personalized_sessions
                                                             : summary.generalized_sessions);
      }
      append_samples(session, f, own);
    }
  };

  parallel_for(users.size(), config.threads, run_user);
  for (const auto& s : per_user) {
    result.summary.generalized_sessions += s.generalized_sessions;
    result.summary.personalized_sessions += s.personalized_sessions;
    result.summary.cold_start_sessions += s.cold_start_sessions;
    result.summary.ingested_sessions += s.ingested_sessions;
    result.summary.personalized_trainings += s.personalized_trainings;
  }
  return result;
}

DecodingQuality evaluate_decoding(const Dataset& dataset, const DecodingResult& result) {
  std::vector<double> ss, ls, all;
  std::vector<int> sl, ll, al;
  for (std::size_t s = 0; s < dataset.sessions.size(); ++s) {
    const auto& out = result.sessions.at(s);
    if (out.cold_start) continue;
    const auto& recs = dataset.sessions[s].records;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (recs[i].snippet_grade) {
        ss.push_back(out.snippet[i]);
        sl.push_back(eeg::binarize_grade(RelevanceGrade(*recs[i].snippet_grade)));
      }
      if (recs[i].landing_grade && out.landing[i]) {
        ls.push_back(*out.landing[i]);
        ll.push_back(eeg::binarize_grade(RelevanceGrade(*recs[i].landing_grade)));
      }
    }
  }
  all = ss;
  all.insert(all.end(), ls.begin(), ls.end());
  al = sl;
  al.insert(al.end(), ll.begin(), ll.end());
  auto safe_auc = [](const std::vector<double>& x, const std::vector<int>& y) -> std::optional<double> {
    try {
      return auc(x, y);
    } catch (const UndefinedMetricError&) {
      return std::nullopt;
    } catch (const InputError&) {
      return std::nullopt;
    }
  };
  DecodingQuality q;
  q.snippet_samples = ss.size();
  q.landing_samples = ls.size();
  q.snippet_auc = safe_auc(ss, sl);
  q.landing_auc = safe_auc(ls, ll);
  q.overall_auc = safe_auc(all, al);
  return q;
}

}  // namespace brainrf
