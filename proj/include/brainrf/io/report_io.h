#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "brainrf/pipeline/decoding.h"
#include "brainrf/pipeline/harness.h"

namespace brainrf::io {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Row table: mode, user, session, query, h, n_clicks, n_bad_clicks, method,
/// w_brain, w_click, w_pseudo, then one column per metric.
void write_report_tsv(const ExperimentReport& report, std::ostream& out);

/// Machine-readable summary. `run` is the resolved run configuration.
nlohmann::ordered_json report_summary(const ExperimentReport& report, const nlohmann::ordered_json& run);

/// "dir/name.tsv" -> "dir/name.summary.json".
std::filesystem::path summary_path_for(const std::filesystem::path& report_path);

/// Writes the TSV at `path` and the summary next to it.
void write_report(const ExperimentReport& report, const nlohmann::ordered_json& run,
                  const std::filesystem::path& path);

/// Rows parsed back from a report TSV. Throws ParseError.
struct ReportTable {
  std::vector<std::string> metric_names;
  std::vector<ReportRow> rows;
};
ReportTable read_report_tsv(const std::filesystem::path& path);

/// Per (mode, method) means in first-appearance order, recomputed from rows.
std::vector<MethodAggregate> aggregate_rows(const std::vector<ReportRow>& rows, std::size_t metric_count);

/// One decode-eval result per (segment length, sampling rate).
struct DecodeEvalRow {
  double post_ms = 0.0;
  double rate_hz = 0.0;
  DecodingQuality quality;
  DecodingSummary summary;
};

void write_decode_eval(const std::vector<DecodeEvalRow>& rows, const nlohmann::ordered_json& run,
                       const std::filesystem::path& path);

}  // namespace brainrf::io
