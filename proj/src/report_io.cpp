#include "homtype/report_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "homtype/error.hpp"

#ifndef HOMTYPE_VERSION
#define HOMTYPE_VERSION "0.0.0"
#endif

namespace homtype {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(SpaceErrorCode code, const std::string& what) { throw SpaceError(code, what); }

void check_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) fail(SpaceErrorCode::schema, where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
    if (!known) fail(SpaceErrorCode::unknown_field, "unknown field '" + item.key() + "' in " + where);
  }
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(SpaceErrorCode::schema, where + " is missing '" + key + "'");
  return *it;
}

double number(const Json& v, const std::string& where) {
  if (!v.is_number()) fail(SpaceErrorCode::schema, where + " must be a number");
  return v.get<double>();
}

std::uint64_t unsigned_id(const Json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    fail(SpaceErrorCode::schema, where + " must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(SpaceErrorCode::io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(SpaceErrorCode::io, "cannot read " + path.string());
  return buf.str();
}

Json parse_json_file(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(SpaceErrorCode::schema, path.string() + ": " + e.what());
  }
}

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

MetricKind parse_metric_kind(const std::string& text) {
  if (text == "euclidean") return MetricKind::euclidean;
  if (text == "sup") return MetricKind::sup;
  if (text == "matrix") return MetricKind::matrix;
  fail(SpaceErrorCode::schema, "unknown metric kind '" + text + "'");
}

Json sample_json(const RegularitySample& s) {
  return Json{{"x", s.x}, {"r", s.r}, {"nu", s.nu}, {"ref", s.ref}, {"ratio", s.ratio}};
}

Json violation_json(const BoundViolation& v) {
  return Json{{"x", v.x}, {"r", v.r}, {"value", v.value}, {"mass", v.mass}, {"bound", v.bound},
              {"side", v.upper ? "upper" : "lower"}};
}

template <class T>
Json array_of(const std::vector<T>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(x);
  return out;
}

const std::set<std::string>& known_analyses() {
  static const std::set<std::string> names{"generate",   "space",       "delta",       "structure",   "normality",
                                           "cover",      "dimension",   "regularity",  "fit",         "consistency",
                                           "threshold",  "theorem_2_1", "theorem_2_2", "equivalence", "outputs"};
  return names;
}

}  // namespace

const char* tool_version() noexcept { return HOMTYPE_VERSION; }

MetricMeasureSpace parse_space_json(const Json& doc, const fs::path& base_dir) {
  check_keys(doc, {"name", "points", "metric"}, "space");
  std::string name = "space";
  if (const auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) fail(SpaceErrorCode::schema, "space name must be a string");
    name = it->get<std::string>();
  }
  const Json& metric = require(doc, "metric", "space");
  check_keys(metric, {"kind", "matrix_file"}, "metric");
  const Json& kind_v = require(metric, "kind", "metric");
  if (!kind_v.is_string()) fail(SpaceErrorCode::schema, "metric kind must be a string");
  const MetricKind kind = parse_metric_kind(kind_v.get<std::string>());

  const Json& points = require(doc, "points", "space");
  if (!points.is_array() || points.empty()) fail(SpaceErrorCode::schema, "points must be a nonempty array");
  const std::size_t n = points.size();
  std::vector<double> weights(n, 0.0);
  std::vector<std::vector<double>> coords(n);
  std::vector<char> seen(n, 0);
  std::optional<std::size_t> dim;
  for (std::size_t k = 0; k < n; ++k) {
    const Json& p = points[k];
    const std::string where = "point #" + std::to_string(k);
    check_keys(p, {"id", "coords", "weight"}, where);
    const std::uint64_t id = unsigned_id(require(p, "id", where), where + " id");
    if (id >= n) fail(SpaceErrorCode::non_dense_ids, "ids must be 0..n-1; found " + std::to_string(id));
    if (seen[id]) fail(SpaceErrorCode::duplicate_id, "point id " + std::to_string(id) + " appears twice");
    seen[id] = 1;
    weights[id] = number(require(p, "weight", where), where + " weight");
    if (const auto c = p.find("coords"); c != p.end()) {
      if (!c->is_array()) fail(SpaceErrorCode::schema, where + " coords must be an array");
      for (const auto& v : *c) coords[id].push_back(number(v, where + " coordinate"));
      if (dim && *dim != coords[id].size()) fail(SpaceErrorCode::schema, "points disagree on coordinate dimension");
      dim = coords[id].size();
    } else if (dim) {
      fail(SpaceErrorCode::schema, "coordinates must be given for all points or none");
    }
  }
  if (dim && std::any_of(coords.begin(), coords.end(), [](const auto& c) { return c.empty(); }))
    fail(SpaceErrorCode::schema, "coordinates must be given for all points or none");
  std::vector<double> flat;
  for (const auto& c : coords) flat.insert(flat.end(), c.begin(), c.end());

  if (kind == MetricKind::matrix) {
    const Json& file = require(metric, "matrix_file", "metric");
    if (!file.is_string()) fail(SpaceErrorCode::schema, "matrix_file must be a string");
    fs::path mpath = file.get<std::string>();
    if (mpath.is_relative()) mpath = base_dir / mpath;
    auto distances = read_matrix_file(mpath, n);
    return MetricMeasureSpace::from_matrix(std::move(name), std::move(distances), std::move(weights), std::move(flat),
                                           dim.value_or(0));
  }
  if (metric.contains("matrix_file")) fail(SpaceErrorCode::schema, "matrix_file is only valid for the matrix kind");
  if (!dim) fail(SpaceErrorCode::schema, "euclidean and sup metrics need coordinates");
  return MetricMeasureSpace::from_coordinates(std::move(name), *dim, std::move(flat), std::move(weights), kind);
}

MetricMeasureSpace parse_space_file(const fs::path& path) {
  return parse_space_json(parse_json_file(path), path.parent_path());
}

Json space_to_json(const MetricMeasureSpace& space, const std::string& matrix_file) {
  Json doc;
  doc["name"] = space.name();
  Json points = Json::array();
  for (PointId i = 0; i < space.size(); ++i) {
    Json p;
    p["id"] = i;
    if (space.has_coordinates()) {
      const auto c = space.coords(i);
      p["coords"] = Json(std::vector<double>(c.begin(), c.end()));
    }
    p["weight"] = space.weight(i);
    points.push_back(std::move(p));
  }
  doc["points"] = std::move(points);
  Json metric;
  metric["kind"] = to_string(space.kind());
  if (space.kind() == MetricKind::matrix) metric["matrix_file"] = matrix_file;
  doc["metric"] = std::move(metric);
  return doc;
}

void write_space_file(const MetricMeasureSpace& space, const fs::path& path) {
  std::string matrix_file;
  if (space.kind() == MetricKind::matrix) {
    fs::path mpath = path;
    mpath.replace_extension(".qmms");
    write_matrix_file(mpath, space.size(), space.matrix());
    matrix_file = mpath.filename().string();
  }
  write_text(path, space_to_json(space, matrix_file).dump(1) + "\n");
}

std::vector<double> read_matrix_file(const fs::path& path, std::optional<std::uint64_t> expected_n) {
  const std::string bytes = read_file(path);
  constexpr std::size_t header = 4 + sizeof(std::uint32_t) + sizeof(std::uint64_t);
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "QMMS", 4) != 0)
    fail(SpaceErrorCode::bad_magic, path.string() + " does not start with QMMS");
  if (bytes.size() < header) fail(SpaceErrorCode::size_mismatch, path.string() + " has a truncated header");
  std::uint32_t version;
  std::uint64_t n;
  std::memcpy(&version, bytes.data() + 4, sizeof version);
  std::memcpy(&n, bytes.data() + 8, sizeof n);
  version = to_little(version);
  n = to_little(n);
  if (version != kMatrixFileVersion) fail(SpaceErrorCode::bad_version, "matrix file version " + std::to_string(version));
  if (expected_n && n != *expected_n)
    fail(SpaceErrorCode::size_mismatch,
         "matrix header n = " + std::to_string(n) + " but the space lists " + std::to_string(*expected_n) + " points");
  if (n > 100000 || bytes.size() != header + n * n * sizeof(double))
    fail(SpaceErrorCode::size_mismatch, path.string() + " payload does not hold n*n doubles");
  std::vector<double> out(n * n);
  std::memcpy(out.data(), bytes.data() + header, out.size() * sizeof(double));
  for (auto& v : out) v = to_little(v);
  return out;
}

void write_matrix_file(const fs::path& path, std::size_t n, std::span<const double> distances) {
  if (distances.size() != n * n) throw PreconditionError("matrix payload does not hold n*n entries");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(SpaceErrorCode::io, "cannot write " + path.string());
  const std::uint32_t version = to_little(kMatrixFileVersion);
  const std::uint64_t count = to_little(std::uint64_t(n));
  out.write("QMMS", 4);
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  for (double v : distances) {
    const double le = to_little(v);
    out.write(reinterpret_cast<const char*>(&le), sizeof le);
  }
  if (!out) fail(SpaceErrorCode::io, "cannot write " + path.string());
}

std::vector<double> parse_measure_json(const Json& doc, std::size_t n) {
  if (!doc.is_object()) fail(SpaceErrorCode::schema, "measure file must be a JSON object {id: weight}");
  std::vector<double> w(n, 0.0);
  for (const auto& item : doc.items()) {
    const std::string& key = item.key();
    std::size_t pos = 0;
    unsigned long long id = 0;
    try {
      id = std::stoull(key, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (key.empty() || pos != key.size() || key[0] == '-' || key[0] == '+')
      fail(SpaceErrorCode::schema, "measure key '" + key + "' is not a point id");
    if (id >= n) fail(SpaceErrorCode::schema, "measure id " + key + " is outside the space");
    const double v = number(item.value(), "measure weight of " + key);
    if (!(v >= 0.0)) fail(SpaceErrorCode::schema, "measure weight of " + key + " is negative");
    w[id] = v;
  }
  return w;
}

std::vector<double> parse_measure_file(const fs::path& path, std::size_t n) {
  return parse_measure_json(parse_json_file(path), n);
}

void write_measure_file(const fs::path& path, std::span<const double> weights) {
  Json doc = Json::object();
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] != 0.0) doc[std::to_string(i)] = weights[i];
  write_text(path, doc.dump(1) + "\n");
}

std::vector<PointId> parse_subset_file(const fs::path& path, const MetricMeasureSpace& space) {
  const Json doc = parse_json_file(path);
  if (!doc.is_array()) fail(SpaceErrorCode::schema, "subset file must be a JSON array of point ids");
  std::vector<PointId> ids;
  for (const auto& v : doc) {
    const std::uint64_t id = unsigned_id(v, "subset entry");
    if (id >= space.size()) fail(SpaceErrorCode::schema, "subset id " + std::to_string(id) + " is outside the space");
    ids.push_back(PointId(id));
  }
  if (ids.empty()) fail(SpaceErrorCode::schema, "subset file is empty");
  return normalize_subset(space, ids);
}

void write_subset_file(const fs::path& path, std::span<const PointId> ids) {
  write_text(path, Json(std::vector<PointId>(ids.begin(), ids.end())).dump() + "\n");
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    fail(SpaceErrorCode::io, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

std::string file_sha256(const fs::path& path) { return sha256_hex(read_file(path)); }

void write_text(const fs::path& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(SpaceErrorCode::io, "cannot write " + path.string());
  out << text;
  if (!out) fail(SpaceErrorCode::io, "cannot write " + path.string());
}

ReportFormat parse_report_format(const std::string& text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv_bundle" || text == "csv") return ReportFormat::csv_bundle;
  throw PreconditionError("unknown report format '" + text + "'");
}

Json report_to_json(const AnalysisReport& report, bool include_timings) {
  Json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["tool"] = "homtype";
  doc["version"] = tool_version();
  doc["command"] = report.command;
  doc["seed"] = report.seed;
  doc["parameters"] = report.parameters;
  Json inputs = Json::array();
  for (const auto& in : report.inputs) inputs.push_back(Json{{"role", in.role}, {"path", in.path}, {"sha256", in.sha256}});
  doc["inputs"] = std::move(inputs);
  doc["constants"] = report.constants ? to_json(*report.constants) : Json(nullptr);
  doc["analyses"] = report.analyses;
  Json curves = Json::array();
  for (const auto& c : report.curves) curves.push_back(Json{{"name", c.name}, {"headers", c.headers}, {"rows", c.rows}});
  doc["curves"] = std::move(curves);
  if (include_timings) {
    Json t = Json::object();
    for (const auto& [k, v] : report.timings) t[k] = v;
    doc["timings"] = std::move(t);
  }
  return doc;
}

AnalysisReport report_from_json(const Json& doc) {
  check_keys(doc, {"schema_version", "tool", "version", "command", "seed", "parameters", "inputs", "constants",
                   "analyses", "curves", "timings"},
             "report");
  const Json& version = require(doc, "schema_version", "report");
  if (!version.is_number_integer() || version.get<int>() != kReportSchemaVersion)
    fail(SpaceErrorCode::bad_version, "unsupported report schema_version " + version.dump());
  AnalysisReport r;
  const Json& command = require(doc, "command", "report");
  if (!command.is_string()) fail(SpaceErrorCode::schema, "report command must be a string");
  r.command = command.get<std::string>();
  r.seed = unsigned_id(require(doc, "seed", "report"), "report seed");
  if (const auto it = doc.find("parameters"); it != doc.end()) {
    if (!it->is_object()) fail(SpaceErrorCode::schema, "report parameters must be an object");
    r.parameters = *it;
  }
  if (const auto it = doc.find("inputs"); it != doc.end()) {
    if (!it->is_array()) fail(SpaceErrorCode::schema, "report inputs must be an array");
    for (const auto& in : *it) {
      check_keys(in, {"role", "path", "sha256"}, "input digest");
      InputDigest d;
      for (auto [key, dst] : {std::pair{"role", &d.role}, {"path", &d.path}, {"sha256", &d.sha256}}) {
        const Json& v = require(in, key, "input digest");
        if (!v.is_string()) fail(SpaceErrorCode::schema, std::string("input digest ") + key + " must be a string");
        *dst = v.get<std::string>();
      }
      r.inputs.push_back(std::move(d));
    }
  }
  if (const auto it = doc.find("constants"); it != doc.end() && !it->is_null()) {
    check_keys(*it, {"K", "A", "N", "ell", "ell_diameter", "sampled"}, "constants");
    StructureConstants c;
    c.K = number(require(*it, "K", "constants"), "K");
    c.A = number(require(*it, "A", "constants"), "A");
    c.N = std::size_t(unsigned_id(require(*it, "N", "constants"), "N"));
    c.ell = int(unsigned_id(require(*it, "ell", "constants"), "ell"));
    c.ell_diameter = int(unsigned_id(require(*it, "ell_diameter", "constants"), "ell_diameter"));
    const Json& sampled = require(*it, "sampled", "constants");
    if (!sampled.is_boolean()) fail(SpaceErrorCode::schema, "constants.sampled must be a boolean");
    c.sampled = sampled.get<bool>();
    r.constants = c;
  }
  if (const auto it = doc.find("analyses"); it != doc.end()) {
    if (!it->is_object()) fail(SpaceErrorCode::schema, "report analyses must be an object");
    for (const auto& item : it->items())
      if (!known_analyses().count(item.key()))
        fail(SpaceErrorCode::unknown_field, "unknown analysis '" + item.key() + "'");
    r.analyses = *it;
  }
  if (const auto it = doc.find("curves"); it != doc.end()) {
    if (!it->is_array()) fail(SpaceErrorCode::schema, "report curves must be an array");
    for (const auto& c : *it) {
      check_keys(c, {"name", "headers", "rows"}, "curve");
      CurveTable t;
      try {
        t.name = require(c, "name", "curve").get<std::string>();
        t.headers = require(c, "headers", "curve").get<std::vector<std::string>>();
        for (const auto& row : require(c, "rows", "curve")) {
          std::vector<double> values;
          for (const auto& v : row) values.push_back(v.is_null() ? std::nan("") : v.get<double>());
          t.rows.push_back(std::move(values));
        }
      } catch (const nlohmann::json::exception& e) {
        fail(SpaceErrorCode::schema, std::string("malformed curve: ") + e.what());
      }
      r.curves.push_back(std::move(t));
    }
  }
  if (const auto it = doc.find("timings"); it != doc.end()) {
    if (!it->is_object()) fail(SpaceErrorCode::schema, "report timings must be an object");
    for (const auto& item : it->items()) r.timings.emplace_back(item.key(), number(item.value(), "timing"));
  }
  return r;
}

std::string curve_csv(const CurveTable& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < table.headers.size(); ++i) out << (i ? "," : "") << table.headers[i];
  out << "\n";
  char buf[32];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
  return out.str();
}

void emit_report(const AnalysisReport& report, ReportFormat format, const fs::path& path, bool include_timings) {
  const std::string text = report_to_json(report, include_timings).dump(1) + "\n";
  if (format == ReportFormat::json) {
    write_text(path, text);
    return;
  }
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) fail(SpaceErrorCode::io, "cannot create " + path.string() + ": " + ec.message());
  write_text(path / "report.json", text);
  for (const auto& c : report.curves) write_text(path / (c.name + ".csv"), curve_csv(c));
}

Json to_json(const StructureConstants& c) {
  return Json{{"K", c.K}, {"A", c.A}, {"N", c.N}, {"ell", c.ell}, {"ell_diameter", c.ell_diameter}, {"sampled", c.sampled}};
}

Json to_json(const NormalityReport& r, bool with_samples) {
  Json j{{"C1", r.C1},
         {"C2", r.C2},
         {"ratio", r.C1 > 0.0 ? r.C2 / r.C1 : std::nan("")},
         {"r_min", r.r_min},
         {"r_max", r.r_max},
         {"sandwich_C1", r.sandwich_C1},
         {"sandwich_C2", r.sandwich_C2},
         {"degenerate", r.degenerate},
         {"audited", r.samples.size()},
         {"witness_low", Json{{"x", r.witness_low.x}, {"r", r.witness_low.r}, {"ratio", r.witness_low.ratio}}},
         {"witness_high", Json{{"x", r.witness_high.x}, {"r", r.witness_high.r}, {"ratio", r.witness_high.ratio}}}};
  if (with_samples) {
    Json s = Json::array();
    for (const auto& x : r.samples) s.push_back(Json{{"x", x.x}, {"r", x.r}, {"ratio", x.ratio}});
    j["samples"] = std::move(s);
  }
  return j;
}

Json to_json(const CoverSolution& s) {
  Json balls = Json::array();
  for (std::size_t i = 0; i < s.balls.size(); ++i) {
    const auto& b = s.balls[i];
    balls.push_back(Json{{"center", b.center},
                         {"radius", b.radius},
                         {"flavor", to_string(b.flavor)},
                         {"closure", b.closure == Closure::open ? "open" : "closed"},
                         {"cost", i < s.ball_costs.size() ? s.ball_costs[i] : std::nan("")}});
  }
  return Json{{"method", to_string(s.method)}, {"feasible", s.feasible},       {"cost", s.cost},
              {"balls", std::move(balls)},     {"covered", array_of(s.covered)}, {"uncovered", array_of(s.uncovered)},
              {"max_overlap", s.max_overlap}};
}

Json to_json(const SmallMeasureCertificate& c) {
  std::size_t below = 0;
  for (double m : c.masses) below += m < c.rho;
  return Json{{"rho", c.rho},
              {"t", c.t},
              {"p", c.p},
              {"m", c.m},
              {"overlap_bound", c.overlap_bound},
              {"radii", c.radii},
              {"masses", c.masses},
              {"balls_below_rho", below},
              {"resolution_floors", c.floors},
              {"covers", c.covers},
              {"masses_below_rho", c.masses_below_rho},
              {"centers_in_target", c.centers_in_target},
              {"overlap_within_bound", c.overlap_within_bound},
              {"radius_remark_applies", c.radius_remark_applies},
              {"radius_remark_holds", c.radius_remark_holds},
              {"max_radius", c.max_radius},
              {"target_diameter", c.target_diameter},
              {"passed", c.passed()}};
}

Json to_json(const RegularityReport& r, bool with_samples) {
  Json j{{"flavor", to_string(r.flavor)},
         {"s", r.s},
         {"c", r.c_best},
         {"c_upper", r.c_upper},
         {"c_lower", r.c_lower},
         {"r_min", r.r_min},
         {"r_max", r.r_max},
         {"local", r.local},
         {"exhaustive", r.exhaustive},
         {"range_raised", r.range_raised},
         {"diam_d", r.diam_d},
         {"diam_delta", r.diam_delta},
         {"audited", r.audited},
         {"witness_low", sample_json(r.witness_low)},
         {"witness_high", sample_json(r.witness_high)}};
  if (with_samples) {
    Json s = Json::array();
    for (const auto& x : r.samples) s.push_back(sample_json(x));
    j["samples"] = std::move(s);
  }
  return j;
}

Json to_json(const PowerLawFit& f) {
  return Json{{"s", f.s}, {"log_constant", f.log_constant}, {"residual", f.residual}, {"samples", f.samples}};
}

Json to_json(const DimensionEstimate& e) {
  Json curves = Json::array();
  for (const auto& c : e.curves)
    curves.push_back(Json{{"s", c.s}, {"points", c.points.size()}, {"stabilized", c.stabilized ? Json(*c.stabilized) : Json(nullptr)}});
  return Json{{"flavor", to_string(e.flavor)}, {"method", to_string(e.method)}, {"s_star", e.s_star},
              {"bracket_lo", e.bracket_lo},    {"bracket_hi", e.bracket_hi},    {"residual", e.residual},
              {"sanity_cap", e.sanity_cap},    {"rho_lo", e.rho_lo},            {"rho_hi", e.rho_hi},
              {"curves", std::move(curves)}};
}

Json to_json(const ConsistencyProfile& p) {
  return Json{{"R_grid", p.R_grid},
              {"inf_mass", p.inf_mass},
              {"argmin", array_of(p.argmin)},
              {"window_labels", p.window_labels},
              {"trend", p.trend},
              {"trend_slope", p.trend_slope},
              {"verdict", to_string(p.verdict)}};
}

Json to_json(const SmallRadiusThreshold& t) {
  return Json{{"r0", t.r0},           {"C", t.C},           {"inf_mass", t.inf_mass},        {"argmin", t.argmin},
              {"quantum", t.quantum}, {"certified", t.certified}, {"inconsistent", t.inconsistent}};
}

Json to_json(const Theorem21Report& r) {
  Json v = Json::array();
  for (const auto& x : r.violations) v.push_back(violation_json(x));
  return Json{{"s", r.s},
              {"c", r.c},
              {"r0", r.r0},
              {"r_lo", r.r_lo},
              {"A", r.A},
              {"ell", r.ell},
              {"upper_factor", r.upper_factor},
              {"lower_factor", r.lower_factor},
              {"audited_upper", r.audited_upper},
              {"audited_lower", r.audited_lower},
              {"skipped", r.skipped},
              {"min_upper_margin", r.min_upper_margin},
              {"min_lower_margin", r.min_lower_margin},
              {"violations", std::move(v)},
              {"passed", r.passed}};
}

Json to_json(const Theorem22Report& r) {
  const auto& p = r.proposition;
  Json prop{{"c_m", p.c_m},
            {"c_lower", p.c_lower},
            {"c_upper", p.c_upper},
            {"c_H", p.c_H},
            {"chain_lower", p.chain_lower},
            {"chain_upper", p.Lambda ? Json(p.chain_upper) : Json(nullptr)},
            {"j", p.j},
            {"Lambda", p.Lambda ? Json(*p.Lambda) : Json(nullptr)},
            {"lower_ok", p.lower_ok},
            {"upper_ok", p.upper_ok ? Json(*p.upper_ok) : Json(nullptr)},
            {"samples", p.samples}};
  Json samples = Json::array();
  for (const auto& s : r.samples)
    samples.push_back(Json{{"x", s.x},
                           {"r", s.r},
                           {"trace", s.trace},
                           {"lower", s.lower},
                           {"upper", s.upper},
                           {"bound_lo", s.bound_lo},
                           {"bound_hi", s.bound_hi},
                           {"certified", s.certified}});
  Json v = Json::array();
  for (const auto& x : r.violations) v.push_back(violation_json(x));
  return Json{{"s", r.s},
              {"C1", r.C1},
              {"C2", r.C2},
              {"threshold", to_json(r.threshold)},
              {"r0", r.r0},
              {"r1", r.r1},
              {"r_lo", r.r_lo},
              {"total_mass", r.total_mass},
              {"rho_star", r.rho_star},
              {"proposition", std::move(prop)},
              {"samples", std::move(samples)},
              {"violations", std::move(v)},
              {"uncertified", r.uncertified},
              {"passed", r.passed}};
}

Json to_json(const EquivalenceReport& r) {
  return Json{{"s", r.s},
              {"ratio_min", r.ratio_min},
              {"ratio_max", r.ratio_max},
              {"cross_min", r.cross_min},
              {"cross_max", r.cross_max},
              {"predicted_lo", r.predicted_lo},
              {"predicted_hi", r.predicted_hi},
              {"slack", r.slack},
              {"within", r.within},
              {"rho", r.rho},
              {"ratios", r.ratios}};
}

CurveTable dimension_curve_table(const DimensionEstimate& e, const std::string& name) {
  CurveTable t{name, {"s", "rho", "lower", "upper"}, {}};
  for (const auto& c : e.curves)
    for (const auto& p : c.points) t.rows.push_back({c.s, p.rho, p.lower, p.upper});
  return t;
}

CurveTable regularity_sample_table(const RegularityReport& r, const std::string& name) {
  CurveTable t{name, {"r", "value"}, {}};
  for (const auto& s : r.samples) t.rows.push_back({s.r, s.ratio});
  return t;
}

CurveTable normality_sample_table(const NormalityReport& r, const std::string& name) {
  CurveTable t{name, {"r", "value"}, {}};
  for (const auto& s : r.samples) t.rows.push_back({s.r, s.ratio});
  return t;
}

}  // namespace homtype
