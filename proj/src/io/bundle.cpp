#include "brainrf/io/bundle.h"

#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "brainrf/core/error.h"
#include "brainrf/io/eeg_files.h"
#include "brainrf/io/json_codec.h"

namespace brainrf::io {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

template <typename Fn>
void for_each_line(const fs::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path.string(), lineno, std::string("invalid JSON: ") + e.what());
    }
    try {
      fn(j);
    } catch (const InputError& e) {
      throw ParseError(path.string(), lineno, e.what());
    }
  }
}

void write_lines(const fs::path& path, const std::vector<Json>& lines) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& j : lines) out << j.dump() << '\n';
}

}  // namespace

Dataset load_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError("dataset directory '" + dir.string() + "' does not exist");
  Dataset ds;
  for_each_line(dir / kQueriesFile, [&](const Json& j) { ds.queries.push_back(query_from_json(j)); });
  for_each_line(dir / kDocumentsFile, [&](const Json& j) { ds.documents.push_back(document_from_json(j)); });
  std::vector<bool> has_unseen;
  for_each_line(dir / kSessionsFile, [&](const Json& j) {
    bool flag = false;
    ds.sessions.push_back(session_from_json(j, flag));
    has_unseen.push_back(flag);
  });
  ds.reindex();

  for (std::size_t s = 0; s < ds.sessions.size(); ++s) {
    Session& sess = ds.sessions[s];
    if (has_unseen[s] || !ds.has_query(sess.query_id)) continue;
    std::unordered_set<std::string> examined;
    for (const auto& r : sess.records) examined.insert(r.doc_id);
    for (const auto& id : ds.query(sess.query_id).doc_ids) {
      if (!examined.count(id)) sess.unseen.push_back(id);
    }
  }

  std::vector<std::string> problems;
  std::unordered_map<std::string, std::size_t> session_index;
  for (std::size_t s = 0; s < ds.sessions.size(); ++s) session_index.emplace(ds.sessions[s].id, s);
  auto attach = [&](const fs::path& index_path, std::size_t rows, auto&& assign) {
    for (const auto& e : read_eeg_index(index_path)) {
      const auto it = session_index.find(e.session);
      if (it == session_index.end()) {
        problems.push_back(index_path.filename().string() + " references unknown session '" + e.session + "'");
        continue;
      }
      Session& sess = ds.sessions[it->second];
      if (e.position >= sess.records.size()) {
        problems.push_back(index_path.filename().string() + " references position " + std::to_string(e.position) +
                           " of session '" + e.session + "' which has " + std::to_string(sess.records.size()) +
                           " records");
        continue;
      }
      if (e.row >= rows) {
        problems.push_back(index_path.filename().string() + " references row " + std::to_string(e.row) +
                           " beyond the data (" + std::to_string(rows) + " rows)");
        continue;
      }
      SessionRecord& r = sess.records[e.position];
      assign(e.kind == "snippet" ? r.snippet_brain : r.landing_brain, e.row);
    }
  };
  if (fs::exists(dir / kFeaturesFile)) {
    const FeatureMatrix m = read_feature_matrix(dir / kFeaturesFile);
    attach(dir / kFeatureIndexFile, m.rows, [&](BrainInput& in, std::size_t row) {
      const float* p = m.values.data() + row * m.cols;
      in.features = std::vector<double>(p, p + m.cols);
    });
  }
  if (fs::exists(dir / kRawFile)) {
    const auto segs = read_segments(dir / kRawFile);
    attach(dir / kRawIndexFile, segs.size(), [&](BrainInput& in, std::size_t row) { in.raw = segs[row]; });
  }

  try {
    ds.validate();
  } catch (const IntegrityError& e) {
    std::ostringstream os;
    os << e.what();
    for (const auto& p : problems) os << "\n  " << p;
    throw IntegrityError(os.str());
  }
  if (!problems.empty()) {
    std::ostringstream os;
    os << problems.size() << " integrity problem(s):";
    for (const auto& p : problems) os << "\n  " << p;
    throw IntegrityError(os.str());
  }
  return ds;
}

void save_bundle(const Dataset& ds, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<Json> lines;
  for (const auto& q : ds.queries) lines.push_back(query_to_json(q));
  write_lines(dir / kQueriesFile, lines);
  lines.clear();
  for (const auto& d : ds.documents) lines.push_back(document_to_json(d));
  write_lines(dir / kDocumentsFile, lines);
  lines.clear();
  for (const auto& s : ds.sessions) lines.push_back(session_to_json(s));
  write_lines(dir / kSessionsFile, lines);

  FeatureMatrix features;
  std::vector<EegIndexEntry> feature_index, raw_index;
  std::vector<std::shared_ptr<const eeg::EegSegment>> segments;
  for (const auto& s : ds.sessions) {
    for (std::size_t i = 0; i < s.records.size(); ++i) {
      const auto& r = s.records[i];
      for (const auto& [in, kind] : {std::pair{&r.snippet_brain, "snippet"}, std::pair{&r.landing_brain, "landing"}}) {
        if (in->features) {
          if (features.cols == 0) features.cols = in->features->size();
          if (in->features->size() != features.cols) throw InputError("feature vectors differ in length");
          feature_index.push_back({s.id, i, kind, features.rows++});
          features.values.insert(features.values.end(), in->features->begin(), in->features->end());
        }
        if (in->raw) {
          raw_index.push_back({s.id, i, kind, segments.size()});
          segments.push_back(in->raw);
        }
      }
    }
  }
  for (const char* f : {kFeaturesFile, kFeatureIndexFile, kRawFile, kRawIndexFile}) fs::remove(dir / f);
  if (features.rows > 0) {
    write_feature_matrix(dir / kFeaturesFile, features);
    write_eeg_index(dir / kFeatureIndexFile, feature_index);
  }
  if (!segments.empty()) {
    write_segments(dir / kRawFile, segments);
    write_eeg_index(dir / kRawIndexFile, raw_index);
  }
}

std::string describe(const Dataset& ds) {
  std::size_t records = 0;
  for (const auto& s : ds.sessions) records += s.records.size();
  return std::to_string(ds.queries.size()) + " queries, " + std::to_string(ds.documents.size()) + " documents, " +
         std::to_string(ds.sessions.size()) + " sessions, " + std::to_string(records) + " examined records";
}

}  // namespace brainrf::io
