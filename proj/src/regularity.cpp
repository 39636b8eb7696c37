#include "homtype/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "detail/kernels.hpp"
#include "homtype/error.hpp"
#include "homtype/parallel.hpp"

namespace homtype {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kFullAuditLimit = 2000;

/// Points of X by their level from one center (distance or delta), ties by id,
/// with prefix masses of nu and mu in that order.
struct LevelRow {
  std::vector<double> value;
  std::vector<double> nu;  // nu[k] = nu-mass of the first k points
  std::vector<double> mu;

  std::size_t closed_count(double v) const {
    return std::size_t(std::upper_bound(value.begin(), value.end(), v) - value.begin());
  }
  std::size_t open_count(double r) const {
    return std::size_t(std::lower_bound(value.begin(), value.end(), r) - value.begin());
  }
};

LevelRow level_row(const MetricMeasureSpace& space, const DeltaTable* table, PointId x,
                   std::span<const double> nu) {
  const std::size_t n = space.size();
  std::vector<std::pair<double, PointId>> keyed(n);
  std::span<const double> drow;
  if (table != nullptr) drow = table->row(x);
  for (PointId y = 0; y < n; ++y) keyed[y] = {table != nullptr ? drow[y] : space.distance(x, y), y};
  std::sort(keyed.begin(), keyed.end());
  LevelRow row;
  row.value.resize(n);
  row.nu.assign(n + 1, 0.0);
  row.mu.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    row.value[k] = keyed[k].first;
    row.nu[k + 1] = row.nu[k] + (nu.empty() ? 0.0 : nu[keyed[k].second]);
    row.mu[k + 1] = row.mu[k] + space.weight(keyed[k].second);
  }
  return row;
}

std::vector<PointId> checked_target(const MetricMeasureSpace& space, std::span<const PointId> target) {
  auto F = normalize_subset(space, target);
  if (F.empty()) throw PreconditionError("target set must be nonempty");
  return F;
}

void check_target_measure(const MetricMeasureSpace& space, const std::vector<PointId>& F,
                          std::span<const double> nu) {
  if (nu.size() != space.size())
    throw PreconditionError("target measure needs one weight per point (" + std::to_string(space.size()) +
                            "), got " + std::to_string(nu.size()));
  std::vector<char> inF(space.size(), 0);
  for (PointId p : F) inF[p] = 1;
  for (PointId y = 0; y < space.size(); ++y) {
    if (!(nu[y] >= 0.0) || !std::isfinite(nu[y]))
      throw PreconditionError("target measure weight at point " + std::to_string(y) + " is not a finite nonnegative number");
    if (nu[y] > 0.0 && !inF[y])
      throw PreconditionError("target measure is not supported on F: point " + std::to_string(y) + " carries weight");
  }
}

double delta_resolution(const DeltaTable& table, const std::vector<PointId>& F) {
  double best = kInf;
  for (PointId a : F)
    for (PointId b : F)
      if (a != b) {
        const double v = table(a, b);
        if (v > 0.0) best = std::min(best, v);
      }
  return best;
}

double delta_diameter_over(const DeltaTable& table, const std::vector<PointId>& F) {
  double best = 0.0;
  for (PointId a : F)
    for (PointId b : F) best = std::max(best, table(a, b));
  return best;
}

std::vector<PointId> audited_centers(const std::vector<PointId>& F, std::size_t max_centers, std::uint64_t seed) {
  std::size_t cap = max_centers;
  if (cap == 0 && F.size() > kFullAuditLimit) cap = kFullAuditLimit;
  return detail::sample_ids(F, cap, seed);
}

/// Distinct positive values in (lo, hi), ascending.
std::vector<double> breakpoints(const LevelRow& row, double lo, double hi) {
  std::vector<double> out;
  for (double v : row.value)
    if (v > lo && v < hi && v > 0.0 && (out.empty() || out.back() != v)) out.push_back(v);
  return out;
}

/// Samples of one center before the vanishing-mass check.
std::vector<RegularitySample> center_samples(const LevelRow& row, PointId x, double s, RegularityFlavor flavor,
                                             double lo, double hi, const RegularityOptions& options) {
  std::vector<RegularitySample> out;
  const bool measure = flavor == RegularityFlavor::measure;
  const auto push = [&](double r, std::size_t k) {
    RegularitySample smp;
    smp.x = x;
    smp.r = r;
    smp.nu = row.nu[k];
    smp.ref = measure ? row.mu[k] : r;
    smp.ratio = smp.nu / std::pow(smp.ref, s);
    out.push_back(smp);
  };
  const auto bps = breakpoints(row, lo, hi);
  if (options.exhaustive) {
    // Open balls are constant on (v_k, v_{k+1}]: the set {level <= v_k}.
    push(lo, row.closed_count(lo));
    for (double v : bps) push(v, row.closed_count(v));
    if (!measure) {
      for (double v : bps) push(v, row.open_count(v));
      push(hi, row.open_count(hi));
    }
  } else {
    const auto grid = thin_log_grid(bps, options.radius_count);
    for (double r : grid) push(r, row.open_count(r));
  }
  return out;
}

}  // namespace

const char* to_string(RegularityFlavor flavor) noexcept {
  switch (flavor) {
    case RegularityFlavor::metric: return "metric";
    case RegularityFlavor::measure: return "measure";
    case RegularityFlavor::delta: return "delta";
  }
  return "unknown";
}

RegularityFlavor parse_regularity_flavor(const std::string& text) {
  if (text == "metric") return RegularityFlavor::metric;
  if (text == "measure" || text == "mu") return RegularityFlavor::measure;
  if (text == "delta") return RegularityFlavor::delta;
  throw PreconditionError("unknown regularity flavor '" + text + "'");
}

RegularityReport regularity_test(const MetricMeasureSpace& space, const DeltaTable* table,
                                 std::span<const PointId> target, std::span<const double> nu, double s,
                                 RegularityFlavor flavor, const RegularityOptions& options) {
  const auto F = checked_target(space, target);
  check_target_measure(space, F, nu);
  if (!(s >= 0.0) || !std::isfinite(s)) throw PreconditionError("exponent s must be a finite nonnegative number");
  const bool delta = flavor == RegularityFlavor::delta;
  if (delta) {
    if (table == nullptr) throw PreconditionError("delta flavor needs a delta table");
    for (PointId x : F)
      if (!table->has_row(x)) throw PreconditionError("delta table has no row for point " + std::to_string(x));
  }
  if (options.local && !(options.r_hi > 0.0)) throw PreconditionError("a local test needs r0 (r_hi)");

  RegularityReport rep;
  rep.flavor = flavor;
  rep.s = s;
  rep.local = options.local;
  rep.exhaustive = options.exhaustive;
  rep.diam_d = diameter(space, F);
  if (delta) rep.diam_delta = delta_diameter_over(*table, F);
  double lo = options.r_lo;
  if (!(lo > 0.0)) lo = delta ? delta_resolution(*table, F) : (F.size() > 1 ? min_positive_distance(space, F) : kInf);
  double hi = options.r_hi > 0.0 ? options.r_hi : (delta ? rep.diam_delta : rep.diam_d);
  if (!(lo < hi) || !std::isfinite(lo))
    throw PreconditionError("empty audited radius range (" + std::to_string(lo) + ", " + std::to_string(hi) + ")");

  const auto centers = audited_centers(F, options.max_centers, options.seed);
  std::vector<std::vector<RegularitySample>> local(centers.size());
  parallel_for(centers.size(), [&](std::size_t i) {
    const LevelRow row = level_row(space, delta ? table : nullptr, centers[i], nu);
    local[i] = center_samples(row, centers[i], s, flavor, lo, hi, options);
  });

  // Vanishing nu inside the range.
  double vanish = -kInf;
  for (const auto& group : local)
    for (const auto& smp : group)
      if (!(smp.nu > 0.0)) {
        if (!options.local)
          throw InvariantViolation("target measure vanishes on the ball around point " + std::to_string(smp.x) +
                                   " of radius " + std::to_string(smp.r) + " inside the audited range");
        vanish = std::max(vanish, smp.r);
      }
  if (vanish > -kInf) {
    lo = vanish;
    rep.range_raised = true;
  }
  rep.r_min = lo;
  rep.r_max = hi;

  rep.c_upper = 0.0;
  rep.c_lower = 0.0;
  bool first = true;
  for (const auto& group : local)
    for (const auto& smp : group) {
      if (rep.range_raised && smp.r <= vanish) continue;
      ++rep.audited;
      if (first || smp.ratio < rep.witness_low.ratio) rep.witness_low = smp;
      if (first || smp.ratio > rep.witness_high.ratio) rep.witness_high = smp;
      first = false;
      rep.c_upper = std::max(rep.c_upper, smp.ratio);
      rep.c_lower = std::max(rep.c_lower, 1.0 / smp.ratio);
      if (options.keep_samples) rep.samples.push_back(smp);
    }
  if (rep.audited == 0) throw PreconditionError("empty audited grid: no realized radius inside the range");
  rep.c_best = std::max({1.0, rep.c_upper, rep.c_lower});
  return rep;
}

PowerLawFit fit_power_law(std::span<const double> refs, std::span<const double> values) {
  if (refs.size() != values.size()) throw PreconditionError("power-law fit needs paired samples");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < refs.size(); ++i)
    if (refs[i] > 0.0 && values[i] > 0.0) {
      x.push_back(std::log(refs[i]));
      y.push_back(std::log(values[i]));
    }
  std::vector<double> distinct = x;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw PreconditionError("degenerate range: fewer than 3 usable scales for the exponent fit");
  const auto [slope, residual] = least_squares_slope(x, y);
  PowerLawFit fit;
  fit.s = slope;
  fit.residual = residual;
  fit.samples = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  fit.log_constant = (my - slope * mx) / double(x.size());
  return fit;
}

PowerLawFit fit_exponent(const MetricMeasureSpace& space, const DeltaTable* table, std::span<const PointId> target,
                         std::span<const double> nu, RegularityFlavor flavor, const RegularityOptions& options) {
  RegularityOptions opts = options;
  opts.keep_samples = true;
  const auto rep = regularity_test(space, table, target, nu, 1.0, flavor, opts);
  std::vector<double> refs, values;
  for (const auto& smp : rep.samples) {
    refs.push_back(smp.ref);
    values.push_back(smp.nu);
  }
  return fit_power_law(refs, values);
}

const char* to_string(ConsistencyVerdict verdict) noexcept {
  switch (verdict) {
    case ConsistencyVerdict::consistent: return "consistent";
    case ConsistencyVerdict::vanishing: return "vanishing";
    case ConsistencyVerdict::undetermined: return "undetermined";
  }
  return "unknown";
}

ConsistencyProfile consistency_profile(const MetricMeasureSpace& space, std::span<const PointId> target,
                                       std::span<const double> R_grid) {
  const auto F = checked_target(space, target);
  ConsistencyProfile prof;
  prof.R_grid.assign(R_grid.begin(), R_grid.end());
  std::sort(prof.R_grid.begin(), prof.R_grid.end());
  if (prof.R_grid.empty() || !(prof.R_grid.front() > 0.0)) throw PreconditionError("R grid must be nonempty and positive");
  std::vector<std::vector<double>> mass(F.size());
  parallel_for(F.size(), [&](std::size_t i) {
    for (double R : prof.R_grid) mass[i].push_back(open_ball_mass(space, F[i], R));
  });
  for (std::size_t k = 0; k < prof.R_grid.size(); ++k) {
    double best = kInf;
    PointId arg = F.front();
    for (std::size_t i = 0; i < F.size(); ++i)
      if (mass[i][k] < best) {
        best = mass[i][k];
        arg = F[i];
      }
    prof.inf_mass.push_back(best);
    prof.argmin.push_back(arg);
  }
  const bool positive = std::all_of(prof.inf_mass.begin(), prof.inf_mass.end(), [](double m) { return m > 0.0; });
  prof.verdict = positive ? ConsistencyVerdict::consistent : ConsistencyVerdict::vanishing;
  return prof;
}

ConsistencyProfile consistency_sweep(std::span<const TruncationWindow> windows, std::span<const double> R_grid) {
  if (windows.empty()) throw PreconditionError("truncation sweep needs at least one window");
  std::vector<TruncationWindow> sorted(windows.begin(), windows.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const TruncationWindow& a, const TruncationWindow& b) { return a.label < b.label; });
  ConsistencyProfile out;
  for (const auto& w : sorted) {
    if (w.space == nullptr) throw PreconditionError("truncation window without a space");
    const auto p = consistency_profile(*w.space, w.target, R_grid);
    out.R_grid = p.R_grid;
    out.inf_mass = p.inf_mass;
    out.argmin = p.argmin;
    out.window_labels.push_back(w.label);
    out.trend.push_back(p.inf_mass);
  }
  if (sorted.size() < 2) {
    out.verdict = consistency_profile(*sorted[0].space, sorted[0].target, R_grid).verdict;
    return out;
  }
  bool vanishing = true, bounded = true;
  for (std::size_t k = 0; k < out.R_grid.size(); ++k) {
    std::vector<double> x, y;
    bool monotone = true, zero = false;
    for (std::size_t w = 0; w < out.trend.size(); ++w) {
      const double m = out.trend[w][k];
      zero |= !(m > 0.0);
      if (w > 0 && m > out.trend[w - 1][k]) monotone = false;
      if (m > 0.0 && out.window_labels[w] > 0.0) {
        x.push_back(std::log(out.window_labels[w]));
        y.push_back(std::log(m));
      }
    }
    double slope = zero ? -kInf : 0.0;
    if (!zero && x.size() >= 2) slope = least_squares_slope(x, y).first;
    out.trend_slope.push_back(slope);
    vanishing &= zero || (monotone && slope <= -0.5);
    bounded &= !zero && out.trend.back()[k] >= 0.5 * out.trend.front()[k];
  }
  out.verdict = vanishing ? ConsistencyVerdict::vanishing
                          : (bounded ? ConsistencyVerdict::consistent : ConsistencyVerdict::undetermined);
  return out;
}

SmallRadiusThreshold small_radius_threshold(const MetricMeasureSpace& space, std::span<const PointId> target,
                                            double r0) {
  const auto F = checked_target(space, target);
  double resolution = kInf;
  for (PointId x : F)
    for (PointId y = 0; y < space.size(); ++y)
      if (y != x) resolution = std::min(resolution, space.distance(x, y));
  if (!(r0 > resolution))
    throw PreconditionError("r0 = " + std::to_string(r0) + " is not above the resolution " + std::to_string(resolution));
  SmallRadiusThreshold out;
  out.r0 = r0;
  double atom = kInf;
  for (PointId y = 0; y < space.size(); ++y) atom = std::min(atom, space.weight(y));
  out.quantum = 0.5 * atom;
  std::vector<LevelRow> rows(F.size());
  parallel_for(F.size(), [&](std::size_t i) { rows[i] = level_row(space, nullptr, F[i], {}); });
  out.inf_mass = kInf;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double m = rows[i].mu[rows[i].open_count(r0)];
    if (m < out.inf_mass) {
      out.inf_mass = m;
      out.argmin = F[i];
    }
  }
  out.C = out.inf_mass - out.quantum;
  if (!(out.C > 0.0)) {
    out.C = 0.0;
    out.inconsistent = true;
    return out;
  }
  out.certified = true;
  for (const auto& row : rows) {
    if (!(row.mu[row.open_count(r0)] > out.C)) out.certified = false;
    for (std::size_t k = 0; k < row.value.size(); ++k)
      if (row.value[k] >= r0 && !(row.mu[row.open_count(row.value[k])] > out.C)) out.certified = false;
  }
  return out;
}

Theorem21Report verify_theorem_2_1(const MetricMeasureSpace& space, std::span<const PointId> target,
                                   std::span<const double> nu, const RegularityReport& delta_report,
                                   const StructureConstants& constants) {
  if (delta_report.flavor != RegularityFlavor::delta || !delta_report.exhaustive)
    throw PreconditionError("Theorem 2.1 audit needs an exhaustive delta-flavor regularity report");
  const auto F = checked_target(space, target);
  check_target_measure(space, F, nu);
  Theorem21Report rep;
  rep.s = delta_report.s;
  rep.c = delta_report.c_best;
  rep.r0 = delta_report.r_max;
  rep.r_lo = delta_report.r_min;
  rep.A = constants.A;
  rep.ell = constants.ell;
  const double s = rep.s;
  const double A_ell = std::pow(rep.A, rep.ell);
  rep.upper_factor = rep.c * std::pow(2.0, s);
  rep.lower_factor = std::pow(A_ell, -s) / rep.c;

  struct Local {
    std::size_t up = 0, low = 0, skipped = 0;
    double up_margin = kInf, low_margin = kInf;
    std::vector<BoundViolation> violations;
  };
  std::vector<Local> local(F.size());
  parallel_for(F.size(), [&](std::size_t i) {
    const PointId x = F[i];
    const LevelRow row = level_row(space, nullptr, x, nu);
    auto& acc = local[i];
    std::size_t k = 0;
    while (k < row.value.size()) {
      const double v = row.value[k];
      while (k < row.value.size() && row.value[k] == v) ++k;
      const double nuB = row.nu[k], muB = row.mu[k];
      if (muB >= A_ell * rep.r0 && muB >= rep.r0 / 2.0) break;
      const double ref = std::pow(muB, s);
      if (muB < rep.r0 / 2.0) {
        if (2.0 * muB > rep.r_lo) {
          ++acc.up;
          const double bound = rep.upper_factor * ref;
          acc.up_margin = std::min(acc.up_margin, nuB > 0.0 ? bound / nuB : kInf);
          if (nuB > bound * (1.0 + 1e-12)) acc.violations.push_back({x, v, nuB, muB, bound, true});
        } else {
          ++acc.skipped;
        }
      }
      if (muB < A_ell * rep.r0) {
        const double rad = muB / A_ell;
        if (rad > rep.r_lo && rad < rep.r0) {
          ++acc.low;
          const double bound = rep.lower_factor * ref;
          acc.low_margin = std::min(acc.low_margin, nuB / bound);
          if (nuB < bound * (1.0 - 1e-12)) acc.violations.push_back({x, v, nuB, muB, bound, false});
        } else {
          ++acc.skipped;
        }
      }
    }
  });
  rep.min_upper_margin = kInf;
  rep.min_lower_margin = kInf;
  for (auto& acc : local) {
    rep.audited_upper += acc.up;
    rep.audited_lower += acc.low;
    rep.skipped += acc.skipped;
    rep.min_upper_margin = std::min(rep.min_upper_margin, acc.up_margin);
    rep.min_lower_margin = std::min(rep.min_lower_margin, acc.low_margin);
    for (auto& v : acc.violations) rep.violations.push_back(v);
  }
  if (!std::isfinite(rep.min_upper_margin)) rep.min_upper_margin = 0.0;
  if (!std::isfinite(rep.min_lower_margin)) rep.min_lower_margin = 0.0;
  rep.passed = rep.violations.empty() && rep.audited_upper > 0 && rep.audited_lower > 0;
  return rep;
}

namespace {

/// Premeasure bracket of subsets of F at a fixed scale, cached by member set.
class RestrictionCache {
 public:
  RestrictionCache(const MetricMeasureSpace& space, double s, double rho, const Theorem22Options& options)
      : space_(space), s_(s), rho_(rho), options_(options) {}

  std::pair<double, double> operator()(const std::vector<PointId>& E) {
    if (E.empty()) return {0.0, 0.0};
    const auto it = cache_.find(E);
    if (it != cache_.end()) return it->second;
    const CandidatePool pool = candidate_pool(space_, nullptr, E, HausdorffFlavor::mu_relative, options_.candidates);
    const PremeasureResult p = premeasure(pool, space_, s_, rho_, options_.limits);
    return cache_.emplace(E, std::make_pair(p.lower, p.upper)).first->second;
  }

 private:
  const MetricMeasureSpace& space_;
  double s_;
  double rho_;
  const Theorem22Options& options_;
  std::map<std::vector<PointId>, std::pair<double, double>> cache_;
};

}  // namespace

Theorem22Report verify_theorem_2_2(const MetricMeasureSpace& space, const DeltaTable& table,
                                   std::span<const PointId> target, const RegularityReport& measure_report,
                                   const StructureConstants& constants, double C1, double C2,
                                   const ConsistencyProfile* consistency, const Theorem22Options& options) {
  if (measure_report.flavor != RegularityFlavor::measure)
    throw PreconditionError("Theorem 2.2 audit needs a measure-flavor regularity report");
  if (!(C1 > 0.0 && C2 >= C1)) throw PreconditionError("normality constants must satisfy 0 < C1 <= C2");
  const auto F = checked_target(space, target);
  for (PointId x : F)
    if (!table.has_row(x)) throw PreconditionError("delta table has no row for point " + std::to_string(x));
  if (consistency != nullptr && consistency->verdict == ConsistencyVerdict::vanishing) {
    std::string slope = consistency->trend_slope.empty() ? "n/a" : std::to_string(consistency->trend_slope.front());
    throw HypothesisRefusal("F is not consistent with mu: the infimum of mu(B(x,R)) over F vanishes along the "
                            "truncation sweep (log-log slope " + slope + ")");
  }

  Theorem22Report rep;
  rep.s = measure_report.s;
  rep.C1 = C1;
  rep.C2 = C2;
  rep.r0 = measure_report.r_max;
  rep.threshold = small_radius_threshold(space, F, rep.r0);
  if (rep.threshold.inconsistent)
    throw HypothesisRefusal("F is not consistent with mu at r0 = " + std::to_string(rep.r0) +
                            ": no positive small-radius threshold");
  for (PointId y = 0; y < space.size(); ++y) rep.total_mass += space.weight(y);
  rep.r1 = std::min(2.0 * rep.total_mass, rep.threshold.C / C2);
  const double s = rep.s;

  rep.rho_star = options.rho_star;
  if (!(rep.rho_star > 0.0)) {
    const CandidatePool pool = candidate_pool(space, nullptr, F, HausdorffFlavor::mu_relative, options.candidates);
    rep.rho_star = mesoscopic_range(pool, space).first;
    if (!(rep.rho_star > 0.0)) throw PreconditionError("F is too small for a restricted premeasure scale");
  }
  RestrictionCache H(space, s, rep.rho_star, options);
  const auto centers = detail::sample_ids(F, options.max_centers, options.seed);
  std::vector<char> inF(space.size(), 0);
  for (PointId p : F) inF[p] = 1;

  // Restriction of H^s against mu(B)^s on d-balls below r0.
  auto& prop = rep.proposition;
  prop.c_m = measure_report.c_best;
  prop.Lambda = options.Lambda;
  prop.j = 2 + smallest_power_of_two_exponent(constants.K * constants.K);
  prop.chain_lower = prop.c_m * prop.c_m;
  const double d_lo = measure_report.r_min;
  for (PointId x : centers) {
    const LevelRow row = level_row(space, nullptr, x, {});
    for (double r : thin_log_grid(breakpoints(row, d_lo, rep.r0), options.radius_count)) {
      std::vector<PointId> E;
      for (PointId y : F)
        if (space.distance(x, y) < r) E.push_back(y);
      const auto [lower, upper] = H(E);
      const double ref = std::pow(row.mu[row.open_count(r)], s);
      prop.c_lower = std::max(prop.c_lower, lower > 0.0 ? ref / lower : kInf);
      prop.c_upper = std::max(prop.c_upper, upper / ref);
      ++prop.samples;
    }
  }
  if (prop.samples == 0) throw PreconditionError("no d-ball radius below r0 for the restricted premeasure");
  prop.c_H = std::max({1.0, prop.c_lower, prop.c_upper});
  prop.lower_ok = prop.c_lower <= prop.chain_lower * (1.0 + 1e-9);
  if (prop.Lambda) {
    prop.chain_upper = prop.chain_lower * *prop.Lambda * std::pow(constants.A, prop.j);
    prop.upper_ok = prop.c_upper <= prop.chain_upper * (1.0 + 1e-9);
  }

  // delta-balls below r1.
  rep.r_lo = delta_resolution(table, F);
  if (!(rep.r1 > rep.r_lo))
    throw PreconditionError("r1 = " + std::to_string(rep.r1) + " is not above the delta resolution " +
                            std::to_string(rep.r_lo));
  const double llo = std::log(rep.r_lo), lhi = std::log(rep.r1);
  const double c = prop.c_H;
  for (PointId x : centers) {
    const auto drow = table.row(x);
    for (std::size_t k = 0; k < options.radius_count; ++k) {
      const double r = std::exp(llo + (lhi - llo) * (double(k) + 0.5) / double(options.radius_count));
      std::vector<PointId> E;
      for (PointId y : F)
        if (drow[y] < r) E.push_back(y);
      const auto [lower, upper] = H(E);
      Theorem22Sample smp{x, r, E.size(), lower, upper, std::pow(C1 * r, s) / c, c * std::pow(C2 * r, s), false};
      smp.certified = lower >= smp.bound_lo * (1.0 - 1e-12) && upper <= smp.bound_hi * (1.0 + 1e-12);
      if (upper < smp.bound_lo * (1.0 - 1e-12)) rep.violations.push_back({x, r, upper, 0.0, smp.bound_lo, false});
      if (lower > smp.bound_hi * (1.0 + 1e-12)) rep.violations.push_back({x, r, lower, 0.0, smp.bound_hi, true});
      if (!smp.certified) ++rep.uncertified;
      rep.samples.push_back(smp);
    }
  }
  rep.passed = rep.violations.empty() && prop.lower_ok && prop.upper_ok.value_or(true);
  return rep;
}

}  // namespace homtype
