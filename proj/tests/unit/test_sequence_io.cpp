#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "cesm/sequence_io.hpp"
#include "cesm/synthgen.hpp"
#include "oracles.hpp"

using namespace cesm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("cesm_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("parse_matrix") {
  const Matrix m = parse_matrix("# comment\n1, 2 3\n\n4,5,6\n");
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 3);
  CHECK(m(1, 2) == 6.0);
  CHECK(kind_of([] { parse_matrix("1 2\n3\n", 4); }) == ErrorKind::MalformedMatrix);
  CHECK(kind_of([] { parse_matrix("1 x\n", 4); }) == ErrorKind::MalformedMatrix);
  CHECK(kind_of([] { parse_matrix("", 4); }) == ErrorKind::MalformedMatrix);
}

TEST_CASE("load_sequence") {
  SUBCASE("one 2 x 3 snapshot") {
    TempDir dir("one");
    write_file(dir.path / "x.csv", "1,0,3\n0,1,4\n");
    write_file(dir.path / "manifest.json", R"({"snapshots": [{"t": 1, "file": "x.csv"}]})");
    const EvolvingSequence seq = load_sequence(dir.path);
    REQUIRE(seq.horizon() == 1);
    CHECK(seq.snapshots[0].size() == 3);
    CHECK(seq.snapshots[0].data(0, 2) == doctest::Approx(0.6));
    CHECK(seq.snapshots[0].point_ids == std::vector<PointId>{0, 1, 2});
    CHECK_FALSE(seq.snapshots[0].truth);
    CHECK(load_sequence(dir.path / "manifest.json").horizon() == 1);
  }

  SUBCASE("pca_dim reduces rows") {
    TempDir dir("pca");
    std::mt19937_64 rng(81);
    const Matrix x = oracle::random_matrix(24, 100, rng);
    std::string text;
    for (Index i = 0; i < 24; ++i) {
      for (Index j = 0; j < 100; ++j) text += (j ? "," : "") + std::to_string(x(i, j));
      text += "\n";
    }
    write_file(dir.path / "x.csv", text);
    write_file(dir.path / "manifest.json", R"({"pca_dim": 8, "snapshots": [{"t": 1, "file": "x.csv"}]})");
    const EvolvingSequence seq = load_sequence(dir.path);
    CHECK(seq.snapshots[0].data.rows() == 8);
    CHECK((seq.snapshots[0].data.colwise().norm().array() - 1.0).abs().maxCoeff() <= 1e-10);
  }

  SUBCASE("ids, truth remapping and t ordering") {
    TempDir dir("ids");
    write_file(dir.path / "a.csv", "1 0\n0 1\n");
    write_file(dir.path / "b.csv", "1 1 0\n0 1 1\n");
    write_file(dir.path / "ids_b.csv", "7\n3\n9\n");
    write_file(dir.path / "truth_b.csv", "5\n2\n5\n");
    write_file(dir.path / "manifest.json",
               R"({"snapshots": [{"t": 2, "file": "b.csv", "point_ids_file": "ids_b.csv", "truth_file": "truth_b.csv"},
                                 {"t": 1, "file": "a.csv"}]})");
    const EvolvingSequence seq = load_sequence(dir.path);
    REQUIRE(seq.horizon() == 2);
    CHECK(seq.snapshots[0].size() == 2);
    CHECK(seq.snapshots[1].point_ids == std::vector<PointId>{7, 3, 9});
    CHECK(*seq.snapshots[1].truth == std::vector<int>{1, 0, 1});
  }

  SUBCASE("errors") {
    TempDir dir("errors");
    CHECK(kind_of([&] { load_sequence(dir.path); }) == ErrorKind::ManifestMissing);
    write_file(dir.path / "x.csv", "1 2\n3\n");
    write_file(dir.path / "manifest.json", R"({"snapshots": [{"t": 1, "file": "x.csv"}]})");
    CHECK(kind_of([&] { load_sequence(dir.path); }) == ErrorKind::MalformedMatrix);
    write_file(dir.path / "x.csv", "1 0\n0 0\n");
    CHECK(kind_of([&] { load_sequence(dir.path); }) == ErrorKind::ZeroColumn);
    write_file(dir.path / "x.csv", "1 0\n0 1\n");
    write_file(dir.path / "ids.csv", "1\n");
    write_file(dir.path / "manifest.json",
               R"({"snapshots": [{"t": 1, "file": "x.csv", "point_ids_file": "ids.csv"}]})");
    CHECK(kind_of([&] { load_sequence(dir.path); }) == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("dump_sequence round trip") {
  TempDir dir("roundtrip");
  ScenarioConfig cfg;
  cfg.horizon = 3;
  cfg.merge = MergeEvent{9, 8, 2, 3};
  Rng rng(5);
  const EvolvingSequence seq = generate_sequence(cfg, rng);
  dump_sequence(seq, dir.path);
  const EvolvingSequence back = load_sequence(dir.path);
  REQUIRE(back.horizon() == 3);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK((back.snapshots[t].data - seq.snapshots[t].data).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(back.snapshots[t].point_ids == seq.snapshots[t].point_ids);
  }
  // Truth is remapped to consecutive values, which keeps the partition.
  const auto& merged = *back.snapshots[1].truth;
  CHECK(*std::max_element(merged.begin(), merged.end()) == 8);
  CHECK(*back.snapshots[0].truth == *seq.snapshots[0].truth);
}
