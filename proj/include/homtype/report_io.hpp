#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "homtype/covering.hpp"
#include "homtype/hausdorff.hpp"
#include "homtype/normalization.hpp"
#include "homtype/regularity.hpp"
#include "homtype/space.hpp"
#include "homtype/structure.hpp"

namespace homtype {

/// Insertion-ordered JSON keeps emitted reports byte-stable.
using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::uint32_t kMatrixFileVersion = 1;

const char* tool_version() noexcept;

// Space files: {name, points: [{id, coords?, weight}], metric: {kind, matrix_file?}}.
// Matrix files: "QMMS", u32 version, u64 n, n*n float64 little-endian row-major.

MetricMeasureSpace parse_space_file(const std::filesystem::path& path);
/// `base_dir` resolves a relative matrix_file.
MetricMeasureSpace parse_space_json(const Json& doc, const std::filesystem::path& base_dir);
/// Matrix spaces also write `<stem>.qmms` next to the JSON file.
void write_space_file(const MetricMeasureSpace& space, const std::filesystem::path& path);
Json space_to_json(const MetricMeasureSpace& space, const std::string& matrix_file = {});

std::vector<double> read_matrix_file(const std::filesystem::path& path, std::optional<std::uint64_t> expected_n = {});
void write_matrix_file(const std::filesystem::path& path, std::size_t n, std::span<const double> distances);

/// Measure files: {"<id>": weight, ...}; absent ids carry zero.
std::vector<double> parse_measure_file(const std::filesystem::path& path, std::size_t n);
std::vector<double> parse_measure_json(const Json& doc, std::size_t n);
void write_measure_file(const std::filesystem::path& path, std::span<const double> weights);

/// Subset files: a JSON array of point ids.
std::vector<PointId> parse_subset_file(const std::filesystem::path& path, const MetricMeasureSpace& space);
void write_subset_file(const std::filesystem::path& path, std::span<const PointId> ids);

std::string sha256_hex(std::string_view bytes);
std::string file_sha256(const std::filesystem::path& path);

/// Writes text to a file, or to stdout for "-".
void write_text(const std::filesystem::path& path, const std::string& text);

struct InputDigest {
  std::string role;  // space, matrix, measure, subset
  std::string path;
  std::string sha256;
};

/// One CSV table of the bundle.
struct CurveTable {
  std::string name;
  std::vector<std::string> headers;
  std::vector<std::vector<double>> rows;
};

struct AnalysisReport {
  std::string command;
  std::uint64_t seed = 0;
  Json parameters = Json::object();
  std::vector<InputDigest> inputs;
  std::optional<StructureConstants> constants;
  Json analyses = Json::object();  // analysis name -> payload
  std::vector<CurveTable> curves;
  std::vector<std::pair<std::string, double>> timings;  // seconds
};

enum class ReportFormat { json, csv_bundle };
ReportFormat parse_report_format(const std::string& text);

/// Timings are left out entirely when include_timings is false.
Json report_to_json(const AnalysisReport& report, bool include_timings = true);
/// Validates the schema version and rejects unknown fields.
AnalysisReport report_from_json(const Json& doc);
/// json: one document at `path` ("-" for stdout). csv_bundle: `path` is a
/// directory receiving report.json and one <name>.csv per curve.
void emit_report(const AnalysisReport& report, ReportFormat format, const std::filesystem::path& path,
                 bool include_timings = true);
std::string curve_csv(const CurveTable& table);

Json to_json(const StructureConstants& c);
Json to_json(const NormalityReport& r, bool with_samples = false);
Json to_json(const CoverSolution& s);
Json to_json(const SmallMeasureCertificate& c);
Json to_json(const RegularityReport& r, bool with_samples = false);
Json to_json(const PowerLawFit& f);
Json to_json(const DimensionEstimate& e);
Json to_json(const ConsistencyProfile& p);
Json to_json(const SmallRadiusThreshold& t);
Json to_json(const Theorem21Report& r);
Json to_json(const Theorem22Report& r);
Json to_json(const EquivalenceReport& r);

/// Curve tables: (s, rho, lower, upper) per estimate, (r, value) per sample list.
CurveTable dimension_curve_table(const DimensionEstimate& e, const std::string& name);
CurveTable regularity_sample_table(const RegularityReport& r, const std::string& name);
CurveTable normality_sample_table(const NormalityReport& r, const std::string& name);

}  // namespace homtype
