#include "brainrf/io/eeg_files.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "brainrf/core/error.h"

namespace brainrf::io {

namespace {

constexpr char kFeatureMagic[8] = {'B', 'R', 'F', 'E', 'A', 'T', '0', '1'};
constexpr char kRawMagic[8] = {'B', 'R', 'R', 'A', 'W', '0', '0', '1'};

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T take(std::ifstream& in, const std::string& file) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ParseError(file, 0, "truncated binary file");
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

void check_magic(std::ifstream& in, const char (&magic)[8], const std::string& file) {
  char buf[8];
  if (!in.read(buf, 8) || std::memcmp(buf, magic, 8) != 0) throw ParseError(file, 0, "bad file header");
}

}  // namespace

void write_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& m) {
  if (m.values.size() != m.rows * m.cols) throw InputError("feature matrix size does not match its shape");
  auto out = open_out(path);
  out.write(kFeatureMagic, 8);
  put<std::uint64_t>(out, m.rows);
  put<std::uint64_t>(out, m.cols);
  out.write(reinterpret_cast<const char*>(m.values.data()), static_cast<std::streamsize>(m.values.size() * sizeof(float)));
}

FeatureMatrix read_feature_matrix(const std::filesystem::path& path) {
  const std::string file = path.string();
  auto in = open_in(path);
  check_magic(in, kFeatureMagic, file);
  FeatureMatrix m;
  m.rows = take<std::uint64_t>(in, file);
  m.cols = take<std::uint64_t>(in, file);
  m.values.resize(m.rows * m.cols);
  if (!in.read(reinterpret_cast<char*>(m.values.data()), static_cast<std::streamsize>(m.values.size() * sizeof(float)))) {
    throw ParseError(file, 0, "truncated feature data");
  }
  return m;
}

void write_segments(const std::filesystem::path& path, const std::vector<std::shared_ptr<const eeg::EegSegment>>& segs) {
  auto out = open_out(path);
  out.write(kRawMagic, 8);
  put<std::uint64_t>(out, segs.size());
  std::vector<float> buf;
  for (const auto& s : segs) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s->channels()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s->samples()));
    put<double>(out, s->sampling_rate_hz());
    put<double>(out, s->pre_stimulus_ms());
    buf.assign(s->data().begin(), s->data().end());
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
  }
}

std::vector<std::shared_ptr<const eeg::EegSegment>> read_segments(const std::filesystem::path& path) {
  const std::string file = path.string();
  auto in = open_in(path);
  check_magic(in, kRawMagic, file);
  const auto count = take<std::uint64_t>(in, file);
  std::vector<std::shared_ptr<const eeg::EegSegment>> out;
  std::vector<float> buf;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto ch = take<std::uint32_t>(in, file);
    const auto n = take<std::uint32_t>(in, file);
    const auto rate = take<double>(in, file);
    const auto pre = take<double>(in, file);
    auto seg = std::make_shared<eeg::EegSegment>(ch, n, rate, pre);
    buf.resize(static_cast<std::size_t>(ch) * n);
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)))) {
      throw ParseError(file, 0, "truncated segment data");
    }
    std::copy(buf.begin(), buf.end(), seg->data().begin());
    out.push_back(std::move(seg));
  }
  return out;
}

void write_eeg_index(const std::filesystem::path& path, const std::vector<EegIndexEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "session\tposition\tkind\trow\n";
  for (const auto& e : entries) out << e.session << '\t' << e.position << '\t' << e.kind << '\t' << e.row << '\n';
}

std::vector<EegIndexEntry> read_eeg_index(const std::filesystem::path& path) {
  const std::string file = path.string();
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + file);
  std::vector<EegIndexEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line != "session\tposition\tkind\trow") throw ParseError(file, lineno, "unexpected header");
      continue;
    }
    if (line.empty()) continue;
    std::istringstream ss(line);
    EegIndexEntry e;
    std::string pos, row;
    if (!std::getline(ss, e.session, '\t') || !std::getline(ss, pos, '\t') || !std::getline(ss, e.kind, '\t') ||
        !std::getline(ss, row)) {
      throw ParseError(file, lineno, "expected four tab-separated fields");
    }
    try {
      e.position = std::stoull(pos);
      e.row = std::stoull(row);
    } catch (const std::exception&) {
      throw ParseError(file, lineno, "position and row must be non-negative integers");
    }
    if (e.kind != "snippet" && e.kind != "landing") throw ParseError(file, lineno, "kind must be snippet or landing");
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace brainrf::io
