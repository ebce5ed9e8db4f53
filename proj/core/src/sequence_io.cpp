#include "cesm/sequence_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace cesm {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string slurp(const fs::path& file, ErrorKind missing_kind) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(missing_kind, "cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string where(int t, std::size_t line) {
  return "t=" + std::to_string(t) + " line " + std::to_string(line);
}

std::vector<double> parse_row(std::string_view line, int t, std::size_t line_no) {
  std::vector<double> row;
  std::size_t pos = 0;
  auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r'; };
  while (pos < line.size()) {
    while (pos < line.size() && is_sep(line[pos])) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !is_sep(line[end])) ++end;
    const char* first = line.data() + pos;
    const char* last = line.data() + end;
    if (*first == '+') ++first;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      fail(ErrorKind::MalformedMatrix, where(t, line_no) + ": bad number '" + std::string(line.substr(pos, end - pos)) + "'");
    }
    row.push_back(value);
    pos = end;
  }
  return row;
}

std::vector<long long> read_integers(const fs::path& file, int t) {
  const Matrix m = read_matrix(file, t);
  std::vector<long long> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  // Row-major reading order: a single row, a single column, or a grid.
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (v != std::floor(v)) fail(ErrorKind::MalformedMatrix, "t=" + std::to_string(t) + ": non-integer entry in " + file.string());
      out.push_back(static_cast<long long>(v));
    }
  }
  return out;
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + file.string());
  out << text;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Matrix parse_matrix(const std::string& text, int t) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r,");
    if (first != std::string_view::npos && line[first] != '#') {
      std::vector<double> row = parse_row(line, t, line_no);
      if (!rows.empty() && row.size() != rows.front().size()) {
        fail(ErrorKind::MalformedMatrix, where(t, line_no) + ": expected " + std::to_string(rows.front().size()) +
                                             " values, found " + std::to_string(row.size()));
      }
      rows.push_back(std::move(row));
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  if (rows.empty()) fail(ErrorKind::MalformedMatrix, "t=" + std::to_string(t) + ": empty matrix");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return m;
}

Matrix read_matrix(const fs::path& file, int t) {
  return parse_matrix(slurp(file, ErrorKind::MalformedMatrix), t);
}

EvolvingSequence load_sequence(const fs::path& path) {
  const fs::path manifest_path = fs::is_directory(path) ? path / "manifest.json" : path;
  if (!fs::exists(manifest_path)) fail(ErrorKind::ManifestMissing, manifest_path.string());
  const fs::path root = manifest_path.parent_path();

  json manifest;
  try {
    manifest = json::parse(slurp(manifest_path, ErrorKind::ManifestMissing));
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, "manifest " + manifest_path.string() + ": " + e.what());
  }
  if (!manifest.contains("snapshots") || !manifest["snapshots"].is_array() || manifest["snapshots"].empty()) {
    fail(ErrorKind::Config, "manifest needs a non-empty 'snapshots' array");
  }
  std::optional<Index> pca_dim;
  if (manifest.contains("pca_dim") && !manifest["pca_dim"].is_null()) pca_dim = manifest["pca_dim"].get<Index>();

  std::map<int, json> by_t;
  for (const json& entry : manifest["snapshots"]) {
    if (!entry.contains("t") || !entry.contains("file")) fail(ErrorKind::Config, "snapshot entries need 't' and 'file'");
    const int t = entry["t"].get<int>();
    if (!by_t.emplace(t, entry).second) fail(ErrorKind::Config, "duplicate snapshot t=" + std::to_string(t));
  }

  EvolvingSequence seq;
  for (const auto& [t, entry] : by_t) {
    Matrix data = read_matrix(root / entry["file"].get<std::string>(), t);
    const auto n = static_cast<std::size_t>(data.cols());

    Snapshot snap;
    if (entry.contains("point_ids_file")) {
      const auto ids = read_integers(root / entry["point_ids_file"].get<std::string>(), t);
      if (ids.size() != n) fail(ErrorKind::DimensionMismatch, "t=" + std::to_string(t) + ": point id count != column count");
      snap.point_ids.assign(ids.begin(), ids.end());
    } else {
      snap.point_ids.resize(n);
      for (std::size_t i = 0; i < n; ++i) snap.point_ids[i] = static_cast<PointId>(i);
    }
    if (entry.contains("truth_file")) {
      const auto raw = read_integers(root / entry["truth_file"].get<std::string>(), t);
      if (raw.size() != n) fail(ErrorKind::DimensionMismatch, "t=" + std::to_string(t) + ": truth count != column count");
      std::vector<long long> uniq = raw;
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
      std::vector<int> truth;
      truth.reserve(n);
      for (long long v : raw) {
        truth.push_back(static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), v) - uniq.begin()));
      }
      snap.truth = std::move(truth);
    }
    if (pca_dim) {
      if (*pca_dim > std::min(data.rows(), data.cols())) {
        fail(ErrorKind::DimensionMismatch, "t=" + std::to_string(t) + ": pca_dim exceeds min(rows, cols)");
      }
      data = pca_project(data, *pca_dim).coordinates;
    }
    try {
      snap.data = normalize_columns(data);
    } catch (const Error& e) {
      const std::string msg = e.what();
      fail(e.kind(), "t=" + std::to_string(t) + ": " + msg.substr(msg.find(": ") + 2));
    }
    validate_snapshot(snap);
    seq.snapshots.push_back(std::move(snap));
  }
  return seq;
}

void dump_sequence(const EvolvingSequence& seq, const fs::path& dir) {
  fs::create_directories(dir);
  json snapshots = json::array();
  for (std::size_t k = 0; k < seq.snapshots.size(); ++k) {
    const Snapshot& s = seq.snapshots[k];
    const int t = static_cast<int>(k) + 1;
    const std::string suffix = std::to_string(t) + ".csv";
    json entry = {{"t", t}, {"file", "X_" + suffix}, {"point_ids_file", "ids_" + suffix}};

    std::string text;
    for (Index i = 0; i < s.data.rows(); ++i) {
      for (Index j = 0; j < s.data.cols(); ++j) {
        if (j) text += ',';
        text += format_double(s.data(i, j));
      }
      text += '\n';
    }
    write_text(dir / ("X_" + suffix), text);

    text.clear();
    for (std::size_t i = 0; i < s.point_ids.size(); ++i) {
      if (i) text += ',';
      text += std::to_string(s.point_ids[i]);
    }
    write_text(dir / ("ids_" + suffix), text + "\n");

    if (s.truth) {
      text.clear();
      for (std::size_t i = 0; i < s.truth->size(); ++i) {
        if (i) text += ',';
        text += std::to_string((*s.truth)[i]);
      }
      write_text(dir / ("truth_" + suffix), text + "\n");
      entry["truth_file"] = "truth_" + suffix;
    }
    snapshots.push_back(std::move(entry));
  }
  write_text(dir / "manifest.json", json{{"snapshots", snapshots}}.dump(2) + "\n");
}

}  // namespace cesm
