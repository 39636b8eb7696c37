#include <gtest/gtest.h>

#include <cstring>
#include <functional>
#include <filesystem>
#include <fstream>
#include <random>

#include "homtype/error.hpp"
#include "homtype/examples.hpp"
#include "homtype/report_io.hpp"

namespace fs = std::filesystem;
using namespace homtype;

namespace {

class ReportIo : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("homtype_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

SpaceErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const SpaceError& e) {
    return e.space_code();
  }
  ADD_FAILURE() << "no SpaceError thrown";
  return SpaceErrorCode::io;
}

}  // namespace

TEST_F(ReportIo, MinimalTwoPointSpaceLoads) {
  const auto p = write("two.json", R"({"name": "two",
    "points": [{"id": 0, "coords": [0.0], "weight": 1.0}, {"id": 1, "coords": [2.5], "weight": 0.5}],
    "metric": {"kind": "euclidean"}})");
  const auto s = parse_space_file(p);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s.distance(0, 1), 2.5);
  EXPECT_DOUBLE_EQ(s.total_mass(), 1.5);
}

TEST_F(ReportIo, SchemaErrorsCarryTheirCodes) {
  const auto unknown = write("u.json", R"({"points": [{"id": 0, "coords": [0], "weight": 1}],
    "metric": {"kind": "euclidean"}, "color": "red"})");
  EXPECT_EQ(code_of([&] { parse_space_file(unknown); }), SpaceErrorCode::unknown_field);

  const auto dup = write("d.json", R"({"points": [{"id": 0, "coords": [0], "weight": 1},
    {"id": 0, "coords": [1], "weight": 1}], "metric": {"kind": "euclidean"}})");
  EXPECT_EQ(code_of([&] { parse_space_file(dup); }), SpaceErrorCode::duplicate_id);

  const auto gap = write("g.json", R"({"points": [{"id": 0, "coords": [0], "weight": 1},
    {"id": 2, "coords": [1], "weight": 1}], "metric": {"kind": "euclidean"}})");
  EXPECT_EQ(code_of([&] { parse_space_file(gap); }), SpaceErrorCode::non_dense_ids);

  const auto zero = write("z.json", R"({"points": [{"id": 0, "coords": [0], "weight": 0}],
    "metric": {"kind": "euclidean"}})");
  EXPECT_EQ(code_of([&] { parse_space_file(zero); }), SpaceErrorCode::nonpositive_weight);

  EXPECT_EQ(code_of([&] { parse_space_file(dir_ / "missing.json"); }), SpaceErrorCode::io);
  const auto broken = write("b.json", "{\"points\": [");
  EXPECT_EQ(code_of([&] { parse_space_file(broken); }), SpaceErrorCode::schema);
}

TEST_F(ReportIo, NonzeroDiagonalIsRejected) {
  const std::vector<double> m{0.1, 1.0, 1.0, 0.0};
  write_matrix_file(dir_ / "m.qmms", 2, m);
  const auto p = write("m.json", R"({"points": [{"id": 0, "weight": 1}, {"id": 1, "weight": 1}],
    "metric": {"kind": "matrix", "matrix_file": "m.qmms"}})");
  EXPECT_EQ(code_of([&] { parse_space_file(p); }), SpaceErrorCode::nonzero_diagonal);
}

TEST_F(ReportIo, MatrixFileRoundTripsBitExactly) {
  const std::size_t n = 100;  // 10^4 entries
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i * n + j] = m[j * n + i] = u(gen) / 3.0;
  write_matrix_file(dir_ / "big.qmms", n, m);
  const auto back = read_matrix_file(dir_ / "big.qmms", n);
  ASSERT_EQ(back.size(), m.size());
  EXPECT_EQ(std::memcmp(back.data(), m.data(), m.size() * sizeof(double)), 0);

  EXPECT_EQ(code_of([&] { read_matrix_file(dir_ / "big.qmms", n + 1); }), SpaceErrorCode::size_mismatch);
  write("junk.qmms", "NOPE0000");
  EXPECT_EQ(code_of([&] { read_matrix_file(dir_ / "junk.qmms"); }), SpaceErrorCode::bad_magic);
}

TEST_F(ReportIo, SpaceFilesRoundTrip) {
  for (const auto& ex : {cantor_space(3), equidistant(5)}) {
    const fs::path p = dir_ / (ex.space.name() + ".json");
    write_space_file(ex.space, p);
    const auto back = parse_space_file(p);
    ASSERT_EQ(back.size(), ex.space.size());
    for (PointId i = 0; i < back.size(); ++i) {
      EXPECT_EQ(back.weight(i), ex.space.weight(i));
      for (PointId j = 0; j < back.size(); ++j) EXPECT_EQ(back.distance(i, j), ex.space.distance(i, j));
    }
  }
}

TEST_F(ReportIo, MeasureAndSubsetFiles) {
  const auto ex = cantor_host(2, 2);
  const auto& nu = ex.measure("natural").weights;
  write_measure_file(dir_ / "nu.json", nu);
  EXPECT_EQ(parse_measure_file(dir_ / "nu.json", ex.space.size()), nu);
  write_subset_file(dir_ / "F.json", ex.F);
  EXPECT_EQ(parse_subset_file(dir_ / "F.json", ex.space), ex.F);
  const auto bad = write("bad.json", "[0, 99]");
  EXPECT_EQ(code_of([&] { parse_subset_file(bad, ex.space); }), SpaceErrorCode::schema);
}

TEST_F(ReportIo, EmptyReportIsValidAndRoundTrips) {
  AnalysisReport r;
  r.command = "delta";
  const Json doc = report_to_json(r);
  EXPECT_EQ(doc["schema_version"], kReportSchemaVersion);
  const auto back = report_from_json(doc);
  EXPECT_EQ(report_to_json(back).dump(), doc.dump());

  Json extra = doc;
  extra["surprise"] = 1;
  EXPECT_THROW(report_from_json(extra), SpaceError);
  Json future = doc;
  future["schema_version"] = kReportSchemaVersion + 1;
  EXPECT_THROW(report_from_json(future), SpaceError);
}

TEST_F(ReportIo, TimingsCanBeLeftOut) {
  AnalysisReport r;
  r.command = "cover";
  r.timings.emplace_back("cover", 0.25);
  EXPECT_TRUE(report_to_json(r, true).contains("timings"));
  EXPECT_FALSE(report_to_json(r, false).contains("timings"));
}

TEST_F(ReportIo, CsvBundleHasOneRowPerGridPoint) {
  AnalysisReport r;
  r.command = "dimension";
  CurveTable t{"curve", {"rho", "lower", "upper"}, {}};
  for (int i = 0; i < 7; ++i) t.rows.push_back({0.1 * (i + 1), 1.0 / (i + 1), 2.0 / (i + 1)});
  r.curves.push_back(t);
  emit_report(r, ReportFormat::csv_bundle, dir_ / "bundle");
  ASSERT_TRUE(fs::exists(dir_ / "bundle" / "report.json"));
  std::ifstream in(dir_ / "bundle" / "curve.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "rho,lower,upper");
  std::size_t rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, t.rows.size());
}

TEST(ReportDigest, Sha256OfKnownInput) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
