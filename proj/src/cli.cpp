#include "homtype/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "homtype/covering.hpp"
#include "homtype/error.hpp"
#include "homtype/examples.hpp"
#include "homtype/hausdorff.hpp"
#include "homtype/normalization.hpp"
#include "homtype/regularity.hpp"
#include "homtype/report_io.hpp"
#include "homtype/structure.hpp"

namespace homtype {

namespace fs = std::filesystem;

namespace {

/// Spaces above this size get sampled structure estimates.
constexpr std::size_t kSampledStructureAbove = 2000;

struct Common {
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string format = "json";
  bool no_timings = false;
};

void add_common(CLI::App* cmd, Common& c, const std::string& report_flag = "--out") {
  cmd->add_option("--seed", c.seed, "Seed for every sampled step")->capture_default_str();
  cmd->add_option(report_flag, c.out, "Report path ('-' for stdout; a directory for csv_bundle)")->capture_default_str();
  cmd->add_option("--format", c.format, "json or csv_bundle")->capture_default_str();
  cmd->add_flag("--no-timings", c.no_timings, "Leave wall-clock timings out of the report");
}

class Stopwatch {
 public:
  explicit Stopwatch(AnalysisReport& report) : report_(report) {}
  template <class F>
  auto time(const std::string& label, F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = fn();
    report_.timings.emplace_back(label, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return result;
  }

 private:
  AnalysisReport& report_;
};

/// Space plus the optional subset and measure files, with input digests.
struct Inputs {
  MetricMeasureSpace space;
  std::vector<PointId> F;
  std::vector<double> nu;
};

Inputs load_inputs(AnalysisReport& report, const std::string& space_path, const std::string& subset_path,
                   const std::string& measure_path) {
  Inputs in;
  in.space = parse_space_file(space_path);
  report.inputs.push_back({"space", space_path, file_sha256(space_path)});
  if (in.space.kind() == MetricKind::matrix) {
    const Json doc = Json::parse(std::ifstream(space_path));
    fs::path m = doc["metric"]["matrix_file"].get<std::string>();
    if (m.is_relative()) m = fs::path(space_path).parent_path() / m;
    report.inputs.push_back({"matrix", m.string(), file_sha256(m)});
  }
  if (!subset_path.empty()) {
    in.F = parse_subset_file(subset_path, in.space);
    report.inputs.push_back({"subset", subset_path, file_sha256(subset_path)});
  } else {
    in.F = all_points(in.space);
  }
  if (!measure_path.empty()) {
    in.nu = parse_measure_file(measure_path, in.space.size());
    report.inputs.push_back({"measure", measure_path, file_sha256(measure_path)});
  }
  return in;
}

StructureConstants structure_constants(const MetricMeasureSpace& space, std::uint64_t seed) {
  StructureOptions opts;
  opts.triangle.seed = seed;
  opts.dimension.seed = seed;
  if (space.size() > kSampledStructureAbove) opts.dimension.max_centers = 64;
  return estimate_structure_constants(space, opts);
}

void finish(const AnalysisReport& report, const Common& c) {
  emit_report(report, parse_report_format(c.format), c.out, !c.no_timings);
}

// generate -----------------------------------------------------------------

struct GenerateArgs {
  Common common;
  std::string family;
  ExampleSpec spec;
  std::string space_out;
};

int cmd_generate(GenerateArgs& a) {
  a.spec.family = parse_example_family(a.family);
  a.spec.seed = a.common.seed;
  AnalysisReport report;
  report.command = "generate";
  report.seed = a.common.seed;
  const auto& s = a.spec;
  report.parameters = Json{{"family", a.family},         {"level", s.level},     {"ratio", s.ratio},
                           {"host_level", s.host_level}, {"n", s.n},             {"dim", s.dim},
                           {"spacing", s.spacing},       {"total_mass", s.total_mass}, {"beta", s.beta},
                           {"a", s.a},                   {"extent", s.extent},   {"resolution", s.resolution},
                           {"f_end", s.f_end},           {"height", s.height},   {"space", a.space_out}};
  Stopwatch clock(report);
  const auto ex = clock.time("generate", [&] { return generate(a.spec); });

  const fs::path space_path = a.space_out;
  if (space_path.has_parent_path()) fs::create_directories(space_path.parent_path());
  write_space_file(ex.space, space_path);
  const auto sibling = [&](const std::string& suffix) {
    fs::path p = space_path;
    p.replace_filename(space_path.stem().string() + suffix);
    return p;
  };
  Json outputs = Json::array();
  const auto record = [&](const std::string& role, const fs::path& p) {
    outputs.push_back(Json{{"role", role}, {"path", p.string()}, {"sha256", file_sha256(p)}});
  };
  record("space", space_path);
  if (ex.space.kind() == MetricKind::matrix) record("matrix", sibling(".qmms"));
  const fs::path subset = sibling(".F.json");
  write_subset_file(subset, ex.F);
  record("subset", subset);
  for (const auto& m : ex.measures) {
    const fs::path p = sibling("." + m.name + ".measure.json");
    write_measure_file(p, m.weights);
    record("measure:" + m.name, p);
  }
  report.analyses["generate"] = Json{{"name", ex.space.name()},
                                     {"points", ex.space.size()},
                                     {"F", ex.F.size()},
                                     {"total_mass", ex.space.total_mass()},
                                     {"metric", to_string(ex.space.kind())},
                                     {"notes", ex.notes}};
  report.analyses["outputs"] = std::move(outputs);
  finish(report, a.common);
  return 0;
}

// delta --------------------------------------------------------------------

struct DeltaArgs {
  Common common;
  std::string space;
  std::string convention = "closed";
  std::string emit = "json";
};

int cmd_delta(DeltaArgs& a) {
  AnalysisReport report;
  report.command = "delta";
  report.seed = a.common.seed;
  report.parameters = Json{{"space", a.space}, {"convention", a.convention}, {"emit", a.emit}};
  const auto in = load_inputs(report, a.space, "", "");
  DeltaConvention conv;
  if (a.convention == "closed") conv = DeltaConvention::closed;
  else if (a.convention == "open") conv = DeltaConvention::open;
  else throw PreconditionError("unknown delta convention '" + a.convention + "'");
  Stopwatch clock(report);
  const auto table = clock.time("delta", [&] { return DeltaTable::compute(in.space, conv); });
  const std::size_t n = in.space.size();
  if (a.emit == "csv") {
    std::string text = "i,j,delta\n";
    char buf[64];
    for (PointId i = 0; i < n; ++i)
      for (PointId j = i + 1; j < n; ++j) {
        std::snprintf(buf, sizeof buf, "%u,%u,%.17g\n", unsigned(i), unsigned(j), table(i, j));
        text += buf;
      }
    write_text(a.common.out, text);
    return 0;
  }
  if (a.emit != "json") throw PreconditionError("unknown --emit '" + a.emit + "'");
  Json rows = Json::array();
  for (PointId i = 0; i < n; ++i) {
    const auto row = table.row(i);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  report.analyses["delta"] = Json{{"n", n},
                                  {"convention", to_string(conv)},
                                  {"min_positive", table.min_positive()},
                                  {"diameter", delta_diameter(table, all_points(in.space))},
                                  {"rows", std::move(rows)}};
  finish(report, a.common);
  return 0;
}

// dimension ----------------------------------------------------------------

struct DimensionArgs {
  Common common;
  std::string space, subset;
  std::string flavor = "metric";
  std::string method = "regression";
  std::vector<double> s_grid, rho_grid;
  std::size_t rho_count = 16;
  bool centers_in_target = false;
  std::string curve_csv;
};

int cmd_dimension(DimensionArgs& a) {
  AnalysisReport report;
  report.command = "dimension";
  report.seed = a.common.seed;
  report.parameters = Json{{"space", a.space},         {"subset", a.subset},    {"flavor", a.flavor},
                           {"method", a.method},       {"s_grid", a.s_grid},    {"rho_grid", a.rho_grid},
                           {"rho_count", a.rho_count}, {"centers_in_target", a.centers_in_target}};
  const auto in = load_inputs(report, a.space, a.subset, "");
  const HausdorffFlavor flavor = parse_hausdorff_flavor(a.flavor);
  DimensionOptions opts;
  if (a.method == "regression") opts.method = DimensionMethod::regression;
  else if (a.method == "bisection") opts.method = DimensionMethod::bisection;
  else throw PreconditionError("unknown dimension method '" + a.method + "'");
  opts.candidates.centers_in_target = a.centers_in_target;
  opts.rho_count = a.rho_count;
  if (!a.rho_grid.empty()) {
    opts.rho_lo = *std::min_element(a.rho_grid.begin(), a.rho_grid.end());
    opts.rho_hi = *std::max_element(a.rho_grid.begin(), a.rho_grid.end());
    opts.rho_count = a.rho_grid.size();
  }
  Stopwatch clock(report);
  std::optional<DeltaTable> table;
  if (flavor == HausdorffFlavor::delta)
    table = clock.time("delta", [&] {
      return a.centers_in_target ? DeltaTable::compute_rows(in.space, in.F) : DeltaTable::compute(in.space);
    });
  const DeltaTable* tp = table ? &*table : nullptr;
  auto est = clock.time("estimate", [&] { return dimension_estimate(in.space, tp, in.F, flavor, opts); });
  report.analyses["dimension"] = to_json(est);
  report.curves.push_back(dimension_curve_table(est, "dimension_curve"));
  if (!a.s_grid.empty()) {
    std::vector<double> grid = a.rho_grid;
    if (grid.empty()) grid = log_spaced(est.rho_lo, est.rho_hi, a.rho_count);
    std::sort(grid.begin(), grid.end());
    DimensionEstimate custom = est;
    custom.curves.clear();
    clock.time("curves", [&] {
      const auto pool = candidate_pool(in.space, tp, in.F, flavor, opts.candidates);
      for (double s : a.s_grid) custom.curves.push_back(dimension_curve(pool, in.space, s, grid, opts.limits));
      return 0;
    });
    report.curves.push_back(dimension_curve_table(custom, "s_grid_curve"));
  }
  if (!a.curve_csv.empty()) write_text(a.curve_csv, curve_csv(report.curves.back()));
  finish(report, a.common);
  return 0;
}

// sset-test ----------------------------------------------------------------

struct SsetArgs {
  Common common;
  std::string space, subset, measure;
  std::string flavor = "metric";
  double s = -1.0;
  bool local = false;
  double r0 = 0.0, r_lo = 0.0;
  bool exhaustive = false;
  std::size_t radius_count = 24, max_centers = 0;
  bool fit = false, samples = false;
};

int cmd_sset(SsetArgs& a) {
  AnalysisReport report;
  report.command = "sset-test";
  report.seed = a.common.seed;
  report.parameters = Json{{"space", a.space},   {"subset", a.subset},       {"measure", a.measure},
                           {"flavor", a.flavor}, {"s", a.s},                 {"local", a.local},
                           {"r0", a.r0},         {"r_lo", a.r_lo},           {"exhaustive", a.exhaustive},
                           {"radius_count", a.radius_count}, {"max_centers", a.max_centers}, {"fit", a.fit}};
  const auto in = load_inputs(report, a.space, a.subset, a.measure);
  const RegularityFlavor flavor = parse_regularity_flavor(a.flavor);
  if (a.s < 0.0 && !a.fit) throw PreconditionError("sset-test needs --s or --fit");
  RegularityOptions opts;
  opts.r_lo = a.r_lo;
  opts.r_hi = a.r0;
  opts.local = a.local;
  opts.exhaustive = a.exhaustive;
  opts.radius_count = a.radius_count;
  opts.max_centers = a.max_centers;
  opts.seed = a.common.seed;
  opts.keep_samples = true;
  Stopwatch clock(report);
  report.constants = clock.time("structure", [&] { return structure_constants(in.space, a.common.seed); });
  std::optional<DeltaTable> table;
  if (flavor == RegularityFlavor::delta) {
    table = clock.time("delta", [&] { return DeltaTable::compute_rows(in.space, in.F); });
    NormalityOptions nopts;
    nopts.seed = a.common.seed;
    nopts.max_centers = 256;
    report.analyses["normality"] = to_json(clock.time("normality", [&] { return normality_constants(*table, nopts); }));
  }
  const DeltaTable* tp = table ? &*table : nullptr;
  if (a.fit) report.analyses["fit"] = to_json(clock.time("fit", [&] { return fit_exponent(in.space, tp, in.F, in.nu, flavor, opts); }));
  if (a.s >= 0.0) {
    const auto rep = clock.time("regularity", [&] { return regularity_test(in.space, tp, in.F, in.nu, a.s, flavor, opts); });
    report.analyses["regularity"] = to_json(rep, a.samples);
    report.curves.push_back(regularity_sample_table(rep, "regularity_samples"));
  }
  finish(report, a.common);
  return 0;
}

// cover --------------------------------------------------------------------

struct CoverArgs {
  Common common;
  std::string space, subset;
  double rho = 0.0, rho_fraction = 0.0;
  std::string method = "lemma31";
  std::string flavor = "mu";
  double s = 1.0;
};

int cmd_cover(CoverArgs& a) {
  AnalysisReport report;
  report.command = "cover";
  report.seed = a.common.seed;
  report.parameters = Json{{"space", a.space}, {"subset", a.subset}, {"rho", a.rho}, {"rho_fraction", a.rho_fraction},
                           {"method", a.method}, {"flavor", a.flavor}, {"s", a.s}};
  const auto in = load_inputs(report, a.space, a.subset, "");
  double G_mass = 0.0;
  for (PointId p : in.F) G_mass += in.space.weight(p);
  double rho = a.rho;
  if (a.rho_fraction > 0.0) rho = a.rho_fraction * G_mass;
  if (!(rho > 0.0)) throw PreconditionError("cover needs --rho or --rho-fraction");
  Stopwatch clock(report);
  int code = 0;
  if (a.method == "lemma31") {
    const auto table = clock.time("delta", [&] { return DeltaTable::compute(in.space); });
    report.constants = clock.time("structure", [&] { return structure_constants(in.space, a.common.seed); });
    const double Kt = estimate_triangle_constant(table).K;
    MetricDimensionOptions dopts;
    dopts.seed = a.common.seed;
    if (in.space.size() > kSampledStructureAbove) dopts.max_centers = 64;
    const std::size_t Nt = estimate_metric_dimension(table, {}, dopts).N;
    SmallMeasureCoverOptions copts{Kt, Nt, std::nullopt};
    if (a.common.seed != 0) copts.order_seed = a.common.seed;
    const auto out = clock.time("cover", [&] { return small_measure_cover(table, *report.constants, in.F, rho, copts); });
    report.analyses["cover"] = to_json(out.cover);
    Json cert = to_json(out.certificate);
    cert["K_tilde"] = Kt;
    cert["N_tilde"] = Nt;
    cert["G_mass"] = G_mass;
    const auto recount = certify_cover(in.space, in.F, out.cover.balls);
    cert["recount"] = Json{{"covers", recount.covers}, {"max_mass", recount.max_mass}, {"max_overlap", recount.max_overlap}};
    report.analyses["cover"]["certificate"] = std::move(cert);
    if (!out.certificate.passed()) code = int(ExitCode::violation);
  } else {
    const HausdorffFlavor flavor = parse_hausdorff_flavor(a.flavor);
    std::optional<DeltaTable> table;
    if (flavor == HausdorffFlavor::delta) table = DeltaTable::compute(in.space);
    const auto pool = candidate_pool(in.space, table ? &*table : nullptr, in.F, flavor);
    const auto cands = admissible(pool, rho, a.s);
    CoverSolution sol;
    if (a.method == "greedy") sol = clock.time("cover", [&] { return greedy_weighted_cover(in.space, in.F, cands); });
    else if (a.method == "exact") sol = clock.time("cover", [&] { return exact_cover_oracle(in.space, in.F, cands); });
    else throw PreconditionError("unknown cover method '" + a.method + "'");
    report.analyses["cover"] = to_json(sol);
    report.analyses["cover"]["lower_bound"] = cover_lower_bound(in.F, cands);
    report.analyses["cover"]["candidates"] = cands.size();
    const auto recount = certify_cover(in.space, in.F, sol.balls);
    report.analyses["cover"]["recount"] =
        Json{{"covers", recount.covers}, {"max_mass", recount.max_mass}, {"max_overlap", recount.max_overlap}};
    if (sol.feasible && !recount.covers) code = int(ExitCode::violation);
  }
  finish(report, a.common);
  return code;
}

// verify -------------------------------------------------------------------

struct VerifyArgs {
  Common common;
  std::string theorem;
  std::string space, subset, measure;
  double s = -1.0;
  double r0 = 0.0;
  std::size_t radius_count = 12, max_centers = 0;
  std::vector<std::string> sweep_spaces, sweep_subsets;
  std::vector<double> sweep_labels, R_grid{1.0, 2.0};
  double lambda = 0.0;
};

int cmd_verify(VerifyArgs& a) {
  AnalysisReport report;
  report.command = "verify";
  report.seed = a.common.seed;
  report.parameters = Json{{"theorem", a.theorem},       {"space", a.space},
                           {"subset", a.subset},         {"measure", a.measure},
                           {"s", a.s},                   {"r0", a.r0},
                           {"radius_count", a.radius_count}, {"max_centers", a.max_centers},
                           {"sweep_spaces", a.sweep_spaces}, {"sweep_subsets", a.sweep_subsets},
                           {"sweep_labels", a.sweep_labels}, {"R_grid", a.R_grid},
                           {"lambda", a.lambda}};
  if (!(a.s >= 0.0)) throw PreconditionError("verify needs --s");
  const auto in = load_inputs(report, a.space, a.subset, a.measure);
  Stopwatch clock(report);
  report.constants = clock.time("structure", [&] { return structure_constants(in.space, a.common.seed); });
  const auto table = clock.time("delta", [&] { return DeltaTable::compute_rows(in.space, in.F); });
  NormalityOptions nopts;
  nopts.seed = a.common.seed;
  nopts.max_centers = 256;
  const auto norm = clock.time("normality", [&] { return normality_constants(table, nopts); });
  report.analyses["normality"] = to_json(norm);

  RegularityOptions ropts;
  ropts.exhaustive = true;
  ropts.local = a.r0 > 0.0;
  ropts.r_hi = a.r0;
  ropts.max_centers = a.max_centers;
  ropts.seed = a.common.seed;
  ropts.keep_samples = false;
  int code = 0;
  if (a.theorem == "2.1") {
    const auto rep = clock.time("regularity", [&] {
      return regularity_test(in.space, &table, in.F, in.nu, a.s, RegularityFlavor::delta, ropts);
    });
    report.analyses["regularity"] = to_json(rep);
    const auto audit = clock.time("theorem", [&] { return verify_theorem_2_1(in.space, in.F, in.nu, rep, *report.constants); });
    report.analyses["theorem_2_1"] = to_json(audit);
    if (!audit.violations.empty()) code = int(ExitCode::violation);
    finish(report, a.common);
    return code;
  }
  if (a.theorem != "2.2") throw PreconditionError("unknown theorem '" + a.theorem + "' (2.1 or 2.2)");

  // The direct delta-flavor test runs regardless of the hypothesis.
  const auto direct = clock.time("regularity_delta", [&] {
    return regularity_test(in.space, &table, in.F, in.nu, a.s, RegularityFlavor::delta, ropts);
  });
  report.analyses["regularity"] = Json{{"delta", to_json(direct)}};
  const auto measure = clock.time("regularity_measure", [&] {
    return regularity_test(in.space, nullptr, in.F, in.nu, a.s, RegularityFlavor::measure, ropts);
  });
  report.analyses["regularity"]["measure"] = to_json(measure);

  std::optional<ConsistencyProfile> profile;
  if (!a.sweep_spaces.empty()) {
    if (a.sweep_spaces.size() != a.sweep_labels.size() || a.sweep_spaces.size() != a.sweep_subsets.size())
      throw PreconditionError("--sweep-spaces, --sweep-subsets and --sweep-labels need equal lengths");
    std::vector<MetricMeasureSpace> spaces;
    std::vector<TruncationWindow> windows;
    spaces.reserve(a.sweep_spaces.size());
    for (std::size_t i = 0; i < a.sweep_spaces.size(); ++i) {
      spaces.push_back(parse_space_file(a.sweep_spaces[i]));
      report.inputs.push_back({"window", a.sweep_spaces[i], file_sha256(a.sweep_spaces[i])});
      report.inputs.push_back({"window_subset", a.sweep_subsets[i], file_sha256(a.sweep_subsets[i])});
    }
    for (std::size_t i = 0; i < spaces.size(); ++i)
      windows.push_back({a.sweep_labels[i], &spaces[i], parse_subset_file(a.sweep_subsets[i], spaces[i])});
    profile = clock.time("consistency", [&] { return consistency_sweep(windows, a.R_grid); });
  } else {
    profile = consistency_profile(in.space, in.F, a.R_grid);
  }
  report.analyses["consistency"] = to_json(*profile);

  Theorem22Options topts;
  topts.radius_count = a.radius_count;
  topts.max_centers = a.max_centers;
  topts.seed = a.common.seed;
  if (a.lambda > 0.0) topts.Lambda = a.lambda;
  try {
    const auto audit = clock.time("theorem", [&] {
      return verify_theorem_2_2(in.space, table, in.F, measure, *report.constants, norm.sandwich_C1, norm.sandwich_C2,
                                &*profile, topts);
    });
    report.analyses["theorem_2_2"] = to_json(audit);
    if (!audit.violations.empty()) code = int(ExitCode::violation);
  } catch (const HypothesisRefusal& e) {
    report.analyses["theorem_2_2"] = Json{{"refused", true}, {"reason", e.what()}};
    code = int(ExitCode::refusal);
  }
  finish(report, a.common);
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"homtype: finite spaces of homogeneous type"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write an example space with its subset and measure files");
  add_common(g, gen.common, "--report");
  g->add_option("--family", gen.family, "cantor, cantor_host, sierpinski, grid1d, equidistant, weighted_plane, uniform_random")
      ->required();
  g->add_option("--out", gen.space_out, "Space JSON path; subset and measure files go next to it")->required();
  g->add_option("--level", gen.spec.level);
  g->add_option("--ratio", gen.spec.ratio);
  g->add_option("--host-level", gen.spec.host_level);
  g->add_option("--n", gen.spec.n);
  g->add_option("--dim", gen.spec.dim);
  g->add_option("--spacing", gen.spec.spacing);
  g->add_option("--total-mass", gen.spec.total_mass);
  g->add_option("--beta", gen.spec.beta);
  g->add_option("--a", gen.spec.a);
  g->add_option("--extent", gen.spec.extent);
  g->add_option("--resolution", gen.spec.resolution);
  g->add_option("--f-end", gen.spec.f_end);
  g->add_option("--height", gen.spec.height);

  DeltaArgs del;
  auto* d = app.add_subcommand("delta", "Quasi-distance table");
  add_common(d, del.common);
  d->add_option("--space", del.space)->required();
  d->add_option("--convention", del.convention, "closed or open")->capture_default_str();
  d->add_option("--emit", del.emit, "json or csv")->capture_default_str();

  DimensionArgs dim;
  auto* m = app.add_subcommand("dimension", "Premeasure curves and dimension estimate");
  add_common(m, dim.common);
  m->add_option("--space", dim.space)->required();
  m->add_option("--subset-file", dim.subset);
  m->add_option("--flavor", dim.flavor, "metric, mu or delta")->capture_default_str();
  m->add_option("--method", dim.method, "regression or bisection")->capture_default_str();
  m->add_option("--s-grid", dim.s_grid)->delimiter(',');
  m->add_option("--rho-grid", dim.rho_grid)->delimiter(',');
  m->add_option("--rho-count", dim.rho_count)->capture_default_str();
  m->add_flag("--centers-in-target", dim.centers_in_target);
  m->add_option("--curve-csv", dim.curve_csv, "Also write the last curve table here");

  SsetArgs ss;
  auto* t = app.add_subcommand("sset-test", "Regularity constant of a measure on F");
  add_common(t, ss.common);
  t->add_option("--space", ss.space)->required();
  t->add_option("--subset-file", ss.subset);
  t->add_option("--measure-file", ss.measure)->required();
  t->add_option("--flavor", ss.flavor, "metric, measure or delta")->capture_default_str();
  t->add_option("--s", ss.s);
  t->add_flag("--local", ss.local);
  t->add_option("--r0", ss.r0, "Upper end of the radius range");
  t->add_option("--r-lo", ss.r_lo, "Lower end of the radius range");
  t->add_flag("--exhaustive", ss.exhaustive);
  t->add_option("--radius-count", ss.radius_count)->capture_default_str();
  t->add_option("--max-centers", ss.max_centers)->capture_default_str();
  t->add_flag("--fit", ss.fit, "Fit the exponent as well");
  t->add_flag("--samples", ss.samples, "Embed every sample in the JSON report");

  CoverArgs cov;
  auto* c = app.add_subcommand("cover", "Covers of a subset by balls");
  add_common(c, cov.common);
  c->add_option("--space", cov.space)->required();
  c->add_option("--subset-file", cov.subset);
  c->add_option("--rho", cov.rho);
  c->add_option("--rho-fraction", cov.rho_fraction, "rho as a fraction of mass(G)");
  c->add_option("--method", cov.method, "lemma31, greedy or exact")->capture_default_str();
  c->add_option("--flavor", cov.flavor, "candidate balls for greedy/exact: metric, mu or delta")->capture_default_str();
  c->add_option("--s", cov.s, "cost exponent for greedy/exact")->capture_default_str();

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Audit the regularity transfer theorems");
  add_common(v, ver.common);
  v->add_option("--theorem", ver.theorem, "2.1 or 2.2")->required();
  v->add_option("--space", ver.space)->required();
  v->add_option("--subset-file", ver.subset);
  v->add_option("--measure-file", ver.measure)->required();
  v->add_option("--s", ver.s)->required();
  v->add_option("--r0", ver.r0, "Local test radius (mass units for 2.1, metric units for 2.2)");
  v->add_option("--radius-count", ver.radius_count)->capture_default_str();
  v->add_option("--max-centers", ver.max_centers)->capture_default_str();
  v->add_option("--sweep-spaces", ver.sweep_spaces)->delimiter(',');
  v->add_option("--sweep-subsets", ver.sweep_subsets)->delimiter(',');
  v->add_option("--sweep-labels", ver.sweep_labels)->delimiter(',');
  v->add_option("--R-grid", ver.R_grid)->delimiter(',');
  v->add_option("--lambda", ver.lambda, "Overlap constant for the upper chain check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return int(ExitCode::refusal);
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*d) return cmd_delta(del);
    if (*m) return cmd_dimension(dim);
    if (*t) return cmd_sset(ss);
    if (*c) return cmd_cover(cov);
    if (*v) return cmd_verify(ver);
  } catch (const SpaceError& e) {
    std::cerr << "homtype: " << e.what() << "\n";
    return int(e.code());
  } catch (const Error& e) {
    std::cerr << "homtype: " << e.what() << "\n";
    return int(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "homtype: malformed input: " << e.what() << "\n";
    return int(ExitCode::io);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "homtype: " << e.what() << "\n";
    return int(ExitCode::io);
  }
  return int(ExitCode::refusal);
}

}  // namespace homtype
