#include "brainrf/io/report_io.h"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "brainrf/core/error.h"

namespace brainrf::io {

using Json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

const char* const kFixedColumns[] = {"mode",   "user",    "session", "query",   "h",       "n_clicks",
                                     "n_bad_clicks", "method", "w_brain", "w_click", "w_pseudo"};
constexpr std::size_t kFixedColumnCount = std::size(kFixedColumns);

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& file, std::size_t line) {
  T v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError(file, line, "bad number '" + text + "'");
  }
  return v;
}

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json decoding_json(const DecodingSummary& s) {
  return {{"generalized_sessions", s.generalized_sessions},
          {"personalized_sessions", s.personalized_sessions},
          {"cold_start_sessions", s.cold_start_sessions},
          {"ingested_sessions", s.ingested_sessions},
          {"personalized_trainings", s.personalized_trainings}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

void write_report_tsv(const ExperimentReport& report, std::ostream& out) {
  for (std::size_t i = 0; i < kFixedColumnCount; ++i) out << (i ? "\t" : "") << kFixedColumns[i];
  for (const auto& m : report.metric_names) out << '\t' << m;
  out << '\n';
  for (const auto& r : report.rows) {
    out << to_string(r.mode) << '\t' << r.user_id << '\t' << r.session_id << '\t' << r.query_id << '\t' << r.h
        << '\t' << r.n_clicks << '\t' << r.n_bad_clicks << '\t' << r.method << '\t' << format_double(r.weights.brain)
        << '\t' << format_double(r.weights.click) << '\t' << format_double(r.weights.pseudo);
    for (double v : r.metrics) out << '\t' << format_double(v);
    out << '\n';
  }
}

Json report_summary(const ExperimentReport& report, const Json& run) {
  Json j;
  j["run"] = run;
  j["seed"] = report.seed;
  j["fingerprint"] = report.fingerprint;
  j["metrics"] = report.metric_names;
  j["rows"] = report.rows.size();
  Json aggs = Json::array();
  for (const auto& a : report.aggregates) {
    Json means = Json::object();
    for (std::size_t m = 0; m < a.means.size(); ++m) means[report.metric_names.at(m)] = a.means[m];
    aggs.push_back({{"mode", std::string(to_string(a.mode))}, {"method", a.method}, {"rows", a.rows}, {"means", means}});
  }
  j["aggregates"] = aggs;
  j["skipped_empty_unseen"] = report.skipped_empty_unseen;
  j["skipped_missing_labels"] = report.skipped_missing_labels;
  j["decoding"] = decoding_json(report.decoding);
  j["warnings"] = report.warnings;
  return j;
}

std::filesystem::path summary_path_for(const std::filesystem::path& report_path) {
  std::filesystem::path p = report_path;
  p.replace_extension(".summary.json");
  return p;
}

void write_report(const ExperimentReport& report, const Json& run, const std::filesystem::path& path) {
  std::ostringstream tsv;
  write_report_tsv(report, tsv);
  write_text(path, tsv.str());
  write_text(summary_path_for(path), report_summary(report, run).dump(2) + "\n");
}

ReportTable read_report_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  const std::string file = path.string();
  if (!in) throw ParseError(file, 0, "cannot open report");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(file, 1, "empty report");
  const auto header = split_tabs(line);
  if (header.size() < kFixedColumnCount) throw ParseError(file, 1, "report header is too short");
  for (std::size_t i = 0; i < kFixedColumnCount; ++i) {
    if (header[i] != kFixedColumns[i]) throw ParseError(file, 1, "unexpected column '" + header[i] + "'");
  }
  ReportTable table;
  table.metric_names.assign(header.begin() + kFixedColumnCount, header.end());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != header.size()) throw ParseError(file, line_no, "wrong number of fields");
    ReportRow r;
    try {
      r.mode = parse_rf_mode(f[0]);
    } catch (const InputError& e) {
      throw ParseError(file, line_no, e.what());
    }
    r.user_id = f[1];
    r.session_id = f[2];
    r.query_id = f[3];
    r.h = parse_number<std::size_t>(f[4], file, line_no);
    r.n_clicks = parse_number<int>(f[5], file, line_no);
    r.n_bad_clicks = parse_number<int>(f[6], file, line_no);
    r.method = f[7];
    r.weights = {parse_number<double>(f[8], file, line_no), parse_number<double>(f[9], file, line_no),
                 parse_number<double>(f[10], file, line_no)};
    for (std::size_t i = kFixedColumnCount; i < f.size(); ++i) r.metrics.push_back(parse_number<double>(f[i], file, line_no));
    table.rows.push_back(std::move(r));
  }
  return table;
}

std::vector<MethodAggregate> aggregate_rows(const std::vector<ReportRow>& rows, std::size_t metric_count) {
  std::vector<MethodAggregate> out;
  std::map<std::pair<int, std::string>, std::size_t> slot;
  for (const auto& r : rows) {
    if (r.metrics.size() != metric_count) throw InputError("row has the wrong number of metrics");
    const auto key = std::make_pair(static_cast<int>(r.mode), r.method);
    auto it = slot.find(key);
    if (it == slot.end()) {
      it = slot.emplace(key, out.size()).first;
      out.push_back({r.mode, r.method, 0, std::vector<double>(metric_count, 0.0)});
    }
    MethodAggregate& a = out[it->second];
    ++a.rows;
    for (std::size_t m = 0; m < metric_count; ++m) a.means[m] += r.metrics[m];
  }
  for (auto& a : out) {
    for (double& v : a.means) v /= static_cast<double>(a.rows);
  }
  return out;
}

void write_decode_eval(const std::vector<DecodeEvalRow>& rows, const Json& run, const std::filesystem::path& path) {
  std::ostringstream tsv;
  tsv << "post_ms\trate_hz\tsnippet_auc\tlanding_auc\toverall_auc\tsnippet_samples\tlanding_samples\n";
  auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("NA"); };
  Json results = Json::array();
  for (const auto& r : rows) {
    tsv << format_double(r.post_ms) << '\t' << format_double(r.rate_hz) << '\t' << cell(r.quality.snippet_auc) << '\t'
        << cell(r.quality.landing_auc) << '\t' << cell(r.quality.overall_auc) << '\t' << r.quality.snippet_samples
        << '\t' << r.quality.landing_samples << '\n';
    results.push_back({{"post_ms", r.post_ms},
                       {"rate_hz", r.rate_hz},
                       {"snippet_auc", optional_number(r.quality.snippet_auc)},
                       {"landing_auc", optional_number(r.quality.landing_auc)},
                       {"overall_auc", optional_number(r.quality.overall_auc)},
                       {"decoding", decoding_json(r.summary)}});
  }
  write_text(path, tsv.str());
  Json summary;
  summary["run"] = run;
  summary["fingerprint"] = fingerprint_of(run.value("seed", std::uint64_t{0}), run.dump());
  summary["results"] = results;
  write_text(summary_path_for(path), summary.dump(2) + "\n");
}

}  // namespace brainrf::io
