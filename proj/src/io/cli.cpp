#include "brainrf/io/cli.h"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "brainrf/core/error.h"
#include "brainrf/io/bundle.h"
#include "brainrf/io/report_io.h"
#include "brainrf/io/run_config.h"
#include "brainrf/pipeline/config_json.h"

namespace brainrf::io {

namespace {

namespace fs = std::filesystem;

// Raw flag values; unset ones leave the configuration untouched.
struct Flags {
  std::string data;
  std::string out;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> weights;
  std::optional<std::size_t> k;
  std::optional<double> c;
  std::optional<std::string> cutoffs;
  bool no_map = false;
  bool scenario = false;
  bool ablate_brain = false;
  bool allow_missing_labels = false;
  std::optional<std::size_t> retrain_every;
  std::optional<std::string> grid;
  std::optional<int> n_synth;
  bool estimate_synthesis = false;
  std::optional<std::string> metric;
  std::optional<int> clusters;
  std::optional<std::string> post_ms;
  std::optional<std::string> rates;
  // synth
  std::optional<int> users;
  std::optional<int> sessions;
  std::optional<int> docs;
  std::optional<double> target_auc;
  std::optional<std::string> emission;
  std::optional<double> bad_click_rate;
  std::optional<double> examined_mean;
  std::optional<double> click_mean;
};

void add_common(CLI::App& sub, Flags& f, bool needs_data) {
  sub.add_option("--config", f.config, "JSON run configuration, or a report summary to re-run");
  sub.add_option("--seed", f.seed, "Seed for all randomness");
  sub.add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  if (needs_data) {
    sub.add_option("--data", f.data, "Dataset directory (default: $BRAINRF_DATA)");
    sub.add_option("--retrain-every", f.retrain_every, "Sessions between personalized decoder retrains");
  }
}

void add_ranking(CLI::App& sub, Flags& f) {
  sub.add_option("--weights", f.weights, "Fixed weights brain,click,pseudo");
  sub.add_option("--cutoffs", f.cutoffs, "NDCG cutoffs, e.g. 1,3,5,10");
  sub.add_flag("--no-map", f.no_map, "Omit the MAP column");
  sub.add_flag("--scenario", f.scenario, "Add the scenario-switching method");
  sub.add_flag("--ablate-brain", f.ablate_brain, "Add the fixed weights with the brain weight set to zero");
}

void add_expansion(CLI::App& sub, Flags& f) {
  sub.add_option("--k", f.k, "Feedback documents used for expansion");
  sub.add_option("--c", f.c, "Expansion trade-off between pseudo and feedback similarity");
  sub.add_flag("--allow-missing-labels", f.allow_missing_labels,
               "Skip rows whose unseen documents lack external labels instead of failing");
}

std::vector<std::size_t> parse_cutoffs(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_number_list(text)) {
    if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw ConfigError("cutoffs must be positive integers, got '" + text + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

void set_fixed_weights(std::vector<MethodSpec>& methods, const CombinationWeights& w) {
  bool found = false;
  for (auto& m : methods) {
    if (m.kind == MethodKind::Fixed && m.name == "fixed") {
      m.weights = w;
      found = true;
    }
  }
  if (!found) methods.push_back({"fixed", MethodKind::Fixed, w});
}

const MethodSpec* fixed_method(const std::vector<MethodSpec>& methods) {
  for (const auto& m : methods) {
    if (m.kind == MethodKind::Fixed) return &m;
  }
  return nullptr;
}

void add_method(std::vector<MethodSpec>& methods, MethodSpec spec) {
  for (const auto& m : methods) {
    if (m.name == spec.name) return;
  }
  methods.push_back(std::move(spec));
}

void apply_method_flags(std::vector<MethodSpec>& methods, const Flags& f) {
  if (f.weights) set_fixed_weights(methods, parse_weights(*f.weights));
  const MethodSpec* fixed = fixed_method(methods);
  const CombinationWeights base = fixed ? fixed->weights : CombinationWeights{0.6, 0.2, 0.2};
  if (f.scenario) add_method(methods, {"scenario", MethodKind::Scenario, base});
  if (f.ablate_brain) add_method(methods, {"nobrain", MethodKind::Fixed, {0.0, base.click, base.pseudo}});
}

RunConfig resolve_config(RunMode mode, const Flags& f) {
  RunConfig rc;
  if (!f.config.empty()) rc = load_run_config(f.config);
  rc.mode = mode;
  if (f.seed) rc.seed = *f.seed;
  HarnessConfig& h = rc.harness;
  if (f.threads) {
    h.threads = *f.threads;
    h.decoding.threads = *f.threads;
  }
  if (f.retrain_every) h.decoding.retrain_every = *f.retrain_every;
  if (f.k) h.expansion.k = *f.k;
  if (f.c) h.expansion.c = *f.c;
  if (f.cutoffs) h.metrics.ndcg_cutoffs = parse_cutoffs(*f.cutoffs);
  if (f.no_map) h.metrics.include_map = false;
  if (mode == RunMode::Rrf) apply_method_flags(h.rrf_methods, f);
  if (mode == RunMode::Irf || mode == RunMode::Adaptive) apply_method_flags(h.irf_methods, f);
  if (f.grid) h.adaptive.grid = parse_number_list(*f.grid);
  if (f.n_synth) h.adaptive.synthesis.n_synth = *f.n_synth;
  if (f.estimate_synthesis) h.adaptive.estimate_synthesis = true;
  if (f.metric) h.adaptive.metric = RankingMetric::parse(*f.metric);
  if (f.clusters) h.adaptive.cluster_count = *f.clusters;
  if (f.post_ms) rc.sweep.post_ms = parse_number_list(*f.post_ms);
  if (f.rates) rc.sweep.rates_hz = parse_number_list(*f.rates);
  GeneratorConfig& g = rc.generator;
  if (f.users) g.users = *f.users;
  if (f.sessions) g.sessions = *f.sessions;
  if (f.docs) g.docs_per_query = *f.docs;
  if (f.target_auc) g.target_auc = *f.target_auc;
  if (f.emission) g.emission = parse_emission_mode(*f.emission);
  if (f.bad_click_rate) g.bad_click_rate = *f.bad_click_rate;
  if (f.examined_mean) g.examined_mean = *f.examined_mean;
  if (f.click_mean) g.click_mean = *f.click_mean;
  rc.validate();
  return rc;
}

fs::path data_dir(const Flags& f) {
  if (!f.data.empty()) return f.data;
  if (const char* env = std::getenv("BRAINRF_DATA"); env != nullptr && *env != '\0') return env;
  throw ConfigError("no dataset given: pass --data DIR or set BRAINRF_DATA");
}

void require_external_labels(const Dataset& ds) {
  const auto missing = ds.documents_missing_external_labels();
  if (missing.empty()) return;
  std::string msg = std::to_string(missing.size()) + " document(s) used by sessions lack an external relevance label (";
  for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 5); ++i) msg += (i ? ", " : "") + missing[i];
  if (missing.size() > 5) msg += ", ...";
  msg += "). Add \"external_relevant\" to those lines of " + std::string(kDocumentsFile) +
         ", pass --allow-missing-labels to skip the affected rows, or use run-rrf, which needs only user grades.";
  throw InputError(msg);
}

int run_report(RunMode mode, const Flags& f, std::ostream& out) {
  const RunConfig rc = resolve_config(mode, f);
  const Dataset ds = load_bundle(data_dir(f));
  if (mode != RunMode::Rrf && !f.allow_missing_labels) require_external_labels(ds);
  ExperimentReport report;
  if (mode == RunMode::Irf) report = run_irf(ds, rc.harness, rc.seed);
  else if (mode == RunMode::Rrf) report = run_rrf(ds, rc.harness, rc.seed);
  else report = run_adaptive_irf(ds, rc.harness, rc.seed);
  const auto run = to_json(rc);
  report.config_json = run.dump();
  report.finalize();
  const fs::path path = f.out.empty() ? fs::path("report.tsv") : fs::path(f.out);
  write_report(report, run, path);
  out << to_string(mode) << ": " << describe(ds) << "; " << report.rows.size() << " rows -> " << path.string() << '\n';
  for (const auto& a : report.aggregates) {
    out << "  " << to_string(a.mode) << ' ' << a.method << " (" << a.rows << " rows)";
    for (std::size_t m = 0; m < a.means.size(); ++m) out << "  " << report.metric_names[m] << '=' << format_double(a.means[m]);
    out << '\n';
  }
  if (report.skipped_empty_unseen + report.skipped_missing_labels > 0) {
    out << "  skipped rows: " << report.skipped_empty_unseen << " with no unseen documents, "
        << report.skipped_missing_labels << " with unlabelled unseen documents\n";
  }
  out << "  fingerprint " << report.fingerprint << '\n';
  return kExitOk;
}

bool has_raw_segments(const Dataset& ds) {
  for (const auto& s : ds.sessions) {
    for (const auto& r : s.records) {
      if (r.snippet_brain.raw || r.landing_brain.raw) return true;
    }
  }
  return false;
}

int run_decode_eval(const Flags& f, std::ostream& out) {
  const RunConfig rc = resolve_config(RunMode::DecodeEval, f);
  const Dataset ds = load_bundle(data_dir(f));
  const bool raw = has_raw_segments(ds);
  if (!raw && (f.post_ms || f.rates)) {
    throw ConfigError("segment-length and sampling-rate sweeps need raw EEG segments (" + std::string(kRawFile) +
                      "); this dataset has none");
  }
  std::vector<DecodeEvalRow> rows;
  const std::vector<double> posts = raw ? rc.sweep.post_ms : std::vector<double>{rc.harness.decoding.preprocess.post_ms};
  const std::vector<double> rates =
      raw ? rc.sweep.rates_hz : std::vector<double>{rc.harness.decoding.preprocess.target_rate_hz};
  for (double post : posts) {
    for (double rate : rates) {
      DecodingConfig dc = rc.harness.decoding;
      dc.preprocess.post_ms = post;
      dc.preprocess.target_rate_hz = rate;
      const DecodingResult res = decode_brain_scores(ds, dc, rc.seed);
      rows.push_back({post, rate, evaluate_decoding(ds, res), res.summary});
      const auto& q = rows.back().quality;
      out << "post_ms=" << format_double(post) << " rate_hz=" << format_double(rate)
          << " snippet_auc=" << (q.snippet_auc ? format_double(*q.snippet_auc) : "NA")
          << " landing_auc=" << (q.landing_auc ? format_double(*q.landing_auc) : "NA") << '\n';
    }
  }
  const fs::path path = f.out.empty() ? fs::path("decode_eval.tsv") : fs::path(f.out);
  write_decode_eval(rows, to_json(rc), path);
  return kExitOk;
}

int run_synth(const Flags& f, std::ostream& out) {
  const RunConfig rc = resolve_config(RunMode::Synth, f);
  if (f.out.empty()) throw ConfigError("synth needs --out DIR");
  const Dataset ds = generate_sessions(rc.generator, rc.seed);
  save_bundle(ds, f.out);
  const CohortStats st = cohort_stats(ds);
  out << "synth: " << describe(ds) << " -> " << f.out << '\n'
      << "  mean examined " << format_double(st.mean_examined) << ", mean clicks " << format_double(st.mean_clicks)
      << ", bad-click fraction " << format_double(st.bad_click_fraction) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Brain-signal relevance feedback experiments"};
  app.require_subcommand(1);
  Flags f;

  auto* irf = app.add_subcommand("run-irf", "Iterative feedback: re-rank unseen documents after each examined one");
  add_common(*irf, f, true);
  add_ranking(*irf, f);
  add_expansion(*irf, f);
  irf->add_option("--out", f.out, "Report TSV (summary written alongside)");

  auto* rrf = app.add_subcommand("run-rrf", "Retrospective feedback: re-rank examined documents after the session");
  add_common(*rrf, f, true);
  add_ranking(*rrf, f);
  rrf->add_option("--out", f.out, "Report TSV (summary written alongside)");

  auto* adaptive = app.add_subcommand("run-adaptive", "Iterative feedback with weights chosen by synthesized search");
  add_common(*adaptive, f, true);
  add_ranking(*adaptive, f);
  add_expansion(*adaptive, f);
  adaptive->add_option("--out", f.out, "Report TSV (summary written alongside)");
  adaptive->add_option("--grid", f.grid, "Weight values searched per channel");
  adaptive->add_option("--n-synth", f.n_synth, "Synthesized draws per cluster");
  adaptive->add_flag("--estimate-synthesis", f.estimate_synthesis, "Estimate synthesis parameters from the data");
  adaptive->add_option("--metric", f.metric, "Search objective: ndcg@K or map");
  adaptive->add_option("--clusters", f.clusters, "Clusters for queries without document cluster labels");

  auto* decode = app.add_subcommand("decode-eval", "Decode brain scores over time and report AUC");
  add_common(*decode, f, true);
  decode->add_option("--out", f.out, "Result TSV (summary written alongside)");
  decode->add_option("--post-ms", f.post_ms, "Post-stimulus windows to sweep, e.g. 500,1000,2000");
  decode->add_option("--rate", f.rates, "Sampling rates to sweep, e.g. 100,250,500");

  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset directory");
  add_common(*synth, f, false);
  synth->add_option("--out", f.out, "Output directory")->required();
  synth->add_option("--users", f.users, "Users");
  synth->add_option("--sessions", f.sessions, "Sessions in total");
  synth->add_option("--docs", f.docs, "Documents per query");
  synth->add_option("--target-auc", f.target_auc, "Brain signal informativeness as decoder AUC");
  synth->add_option("--emission", f.emission, "features, scores or raw");
  synth->add_option("--bad-click-rate", f.bad_click_rate, "Share of clicks landing on irrelevant pages");
  synth->add_option("--examined-mean", f.examined_mean, "Mean documents examined per session");
  synth->add_option("--click-mean", f.click_mean, "Mean clicks per session");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kExitValidation;
  }

  try {
    if (irf->parsed()) return run_report(RunMode::Irf, f, out);
    if (rrf->parsed()) return run_report(RunMode::Rrf, f, out);
    if (adaptive->parsed()) return run_report(RunMode::Adaptive, f, out);
    if (decode->parsed()) return run_decode_eval(f, out);
    return run_synth(f, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IntegrityError& e) {
    err << "invalid dataset: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace brainrf::io
