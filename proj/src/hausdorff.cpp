#include "homtype/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "homtype/error.hpp"
#include "homtype/neighborhoods.hpp"
#include "homtype/parallel.hpp"

namespace homtype {

namespace {

struct RawBall {
  BallSpec ball;
  std::vector<PointId> trace;
  std::string key;  // bitset of the trace over F indices
  double scale = 0.0;
  double mass = 0.0;
  char floored = 0;
};

/// Candidates around one center: one per distinct level of the F points.
std::vector<RawBall> balls_around(const MetricMeasureSpace& space, const DeltaTable* table,
                                  const std::vector<PointId>& F, HausdorffFlavor flavor, PointId z) {
  const bool delta = flavor == HausdorffFlavor::delta;
  const std::size_t n = space.size();
  std::vector<std::pair<double, std::size_t>> keyed(F.size());
  std::span<const double> drow;
  if (delta) drow = table->row(z);
  for (std::size_t k = 0; k < F.size(); ++k) keyed[k] = {delta ? drow[F[k]] : space.distance(z, F[k]), k};
  std::sort(keyed.begin(), keyed.end());

  // Level masses over all of X (closed balls) and the floor for a zero level.
  std::vector<double> level_value(n);
  for (PointId y = 0; y < n; ++y) level_value[y] = delta ? drow[y] : space.distance(z, y);
  std::vector<std::pair<double, double>> all(n);
  for (PointId y = 0; y < n; ++y) all[y] = {level_value[y], space.weight(y)};
  std::sort(all.begin(), all.end());
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + all[k].second;
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& [v, w] : all)
    if (v > 0.0) {
      nearest = v;
      break;
    }
  const auto closed_mass = [&](double v) {
    const auto it = std::upper_bound(all.begin(), all.end(), std::make_pair(v, std::numeric_limits<double>::infinity()));
    return prefix[std::size_t(it - all.begin())];
  };

  std::vector<RawBall> out;
  std::string key((F.size() + 7) / 8, '\0');
  std::vector<PointId> trace;
  std::size_t k = 0;
  while (k < keyed.size()) {
    const double v = keyed[k].first;
    while (k < keyed.size() && keyed[k].first == v) {
      const std::size_t idx = keyed[k].second;
      key[idx / 8] = char(key[idx / 8] | (1 << (idx % 8)));
      trace.push_back(F[idx]);
      ++k;
    }
    RawBall b;
    b.ball = {z, v, delta ? BallFlavor::delta : BallFlavor::d, Closure::closed};
    b.trace = trace;
    std::sort(b.trace.begin(), b.trace.end());
    b.key = key;
    b.mass = closed_mass(v);
    if (flavor == HausdorffFlavor::mu_relative) {
      b.scale = b.mass;
    } else if (v > 0.0) {
      b.scale = v;
    } else {
      b.scale = 0.5 * nearest;
      b.floored = 1;
    }
    out.push_back(std::move(b));
  }
  return out;
}

double pow_cost(double scale, double s) { return s == 0.0 ? 1.0 : std::pow(scale, s); }

bool admissible_scale(HausdorffFlavor flavor, double scale, double rho) {
  return flavor == HausdorffFlavor::mu_relative ? scale <= rho : scale < rho;
}

std::vector<PointId> checked_target(const MetricMeasureSpace& space, std::span<const PointId> target) {
  auto F = normalize_subset(space, target);
  if (F.empty()) throw PreconditionError("target set must be nonempty");
  return F;
}

double delta_diameter_of(const DeltaTable& table, const std::vector<PointId>& F) {
  double best = 0.0;
  for (PointId a : F)
    for (PointId b : F) best = std::max(best, table(a, b));
  return best;
}

}  // namespace

const char* to_string(HausdorffFlavor flavor) noexcept {
  switch (flavor) {
    case HausdorffFlavor::metric: return "metric";
    case HausdorffFlavor::mu_relative: return "mu_relative";
    case HausdorffFlavor::delta: return "delta";
  }
  return "unknown";
}

HausdorffFlavor parse_hausdorff_flavor(const std::string& text) {
  if (text == "metric") return HausdorffFlavor::metric;
  if (text == "mu_relative" || text == "mu" || text == "measure") return HausdorffFlavor::mu_relative;
  if (text == "delta") return HausdorffFlavor::delta;
  throw PreconditionError("unknown Hausdorff flavor '" + text + "'");
}

const char* to_string(DimensionMethod method) noexcept {
  return method == DimensionMethod::regression ? "regression" : "bisection";
}

CandidatePool candidate_pool(const MetricMeasureSpace& space, const DeltaTable* table, std::span<const PointId> target,
                             HausdorffFlavor flavor, const CandidateOptions& options) {
  CandidatePool pool;
  pool.flavor = flavor;
  pool.table = table;
  pool.target = checked_target(space, target);
  if (flavor == HausdorffFlavor::delta && table == nullptr)
    throw PreconditionError("delta flavor needs a delta table");
  const std::vector<PointId> centers = options.centers_in_target ? pool.target : all_points(space);

  std::vector<std::vector<RawBall>> local(centers.size());
  parallel_for(centers.size(),
               [&](std::size_t k) { local[k] = balls_around(space, table, pool.target, flavor, centers[k]); });

  std::unordered_map<std::string, std::size_t> seen;
  std::vector<RawBall> kept;
  for (auto& group : local)
    for (auto& b : group) {
      const auto it = seen.find(b.key);
      if (it == seen.end()) {
        seen.emplace(b.key, kept.size());
        kept.push_back(std::move(b));
      } else if (b.scale < kept[it->second].scale) {
        kept[it->second] = std::move(b);
      }
    }
  std::vector<std::size_t> order(kept.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (kept[a].scale != kept[b].scale) return kept[a].scale < kept[b].scale;
    if (kept[a].ball.center != kept[b].ball.center) return kept[a].ball.center < kept[b].ball.center;
    return kept[a].ball.radius < kept[b].ball.radius;
  });
  for (std::size_t i : order) {
    auto& b = kept[i];
    pool.balls.push_back({b.ball, std::move(b.trace), b.mass, 0.0});
    pool.scales.push_back(b.scale);
    pool.floored.push_back(b.floored);
  }
  return pool;
}

std::vector<CoverCandidate> admissible(const CandidatePool& pool, double rho, double s) {
  std::vector<CoverCandidate> out;
  for (std::size_t i = 0; i < pool.balls.size(); ++i) {
    if (!admissible_scale(pool.flavor, pool.scales[i], rho)) continue;
    out.push_back(pool.balls[i]);
    out.back().cost = pow_cost(pool.scales[i], s);
  }
  return out;
}

std::vector<BallSpec> candidate_balls(const MetricMeasureSpace& space, const DeltaTable* table,
                                      std::span<const PointId> target, HausdorffFlavor flavor, double rho,
                                      const CandidateOptions& options) {
  const CandidatePool pool = candidate_pool(space, table, target, flavor, options);
  std::vector<BallSpec> out;
  for (const auto& c : admissible(pool, rho, 0.0)) out.push_back(c.ball);
  if (out.empty()) throw PreconditionError("no admissible ball at rho = " + std::to_string(rho) + " (below resolution)");
  return out;
}

PremeasureResult premeasure(const CandidatePool& pool, const MetricMeasureSpace& space, double s, double rho,
                            const ExactCoverLimits& limits) {
  if (!(s >= 0.0)) throw PreconditionError("exponent s must be nonnegative");
  const auto cands = admissible(pool, rho, s);
  if (cands.empty()) throw PreconditionError("no admissible ball at rho = " + std::to_string(rho) + " (below resolution)");
  PremeasureResult out;
  out.cover = greedy_weighted_cover(space, pool.target, cands);
  if (!out.cover.feasible)
    throw PreconditionError("candidate pool leaves " + std::to_string(out.cover.uncovered.size()) +
                            " target points uncovered at rho = " + std::to_string(rho));
  out.upper = out.cover.cost;
  out.lower = cover_lower_bound(pool.target, cands);
  if (pool.target.size() <= limits.max_targets) {
    try {
      const CoverSolution exact = exact_cover_oracle(space, pool.target, cands, limits);
      out.exact = true;
      out.exact_cost = exact.cost;
      out.lower = exact.cost;
    } catch (const LimitExceeded&) {
    }
  }
  out.lower = std::min(out.lower, out.upper);
  out.cover.max_overlap = pool.flavor == HausdorffFlavor::delta ? overlap_count(*pool.table, out.cover.balls).max
                                                                 : overlap_count(space, out.cover.balls).max;
  if (pool.flavor == HausdorffFlavor::metric) {
    const double diam = diameter(space, pool.target);
    for (const auto& b : out.cover.balls) out.uses_scale_beyond_diameter |= b.radius > diam;
  } else if (pool.flavor == HausdorffFlavor::delta) {
    const double diam = delta_diameter_of(*pool.table, pool.target);
    for (const auto& b : out.cover.balls) out.uses_scale_beyond_diameter |= b.radius > diam;
  }
  return out;
}

PremeasureResult premeasure(const MetricMeasureSpace& space, const DeltaTable* table, std::span<const PointId> target,
                            double s, double rho, HausdorffFlavor flavor, const CandidateOptions& options,
                            const ExactCoverLimits& limits) {
  return premeasure(candidate_pool(space, table, target, flavor, options), space, s, rho, limits);
}

DimensionCurve dimension_curve(const CandidatePool& pool, const MetricMeasureSpace& space, double s,
                               std::span<const double> rho_grid, const ExactCoverLimits& limits) {
  std::vector<double> grid(rho_grid.begin(), rho_grid.end());
  std::sort(grid.begin(), grid.end());
  DimensionCurve curve;
  curve.flavor = pool.flavor;
  curve.s = s;
  for (double rho : grid) {
    const PremeasureResult p = premeasure(pool, space, s, rho, limits);
    curve.points.push_back({rho, p.lower, p.upper});
  }
  auto& pts = curve.points;
  for (std::size_t i = 1; i < pts.size(); ++i) pts[i].upper = std::min(pts[i].upper, pts[i - 1].upper);
  for (std::size_t i = pts.size(); i-- > 1;) pts[i - 1].lower = std::max(pts[i - 1].lower, pts[i].lower);
  if (!pts.empty()) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, logsum = 0.0;
    for (const auto& p : pts) {
      lo = std::min(lo, p.upper);
      hi = std::max(hi, p.upper);
      logsum += std::log(p.upper);
    }
    if (lo > 0.0 && hi <= 1.5 * lo) curve.stabilized = std::exp(logsum / double(pts.size()));
  }
  return curve;
}

std::pair<double, double> least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw PreconditionError("least squares needs at least two paired samples");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw PreconditionError("least squares needs distinct abscissae");
  const double slope = sxy / sxx;
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::fabs(y[i] - (my + slope * (x[i] - mx))));
  return {slope, residual};
}

std::pair<double, double> mesoscopic_range(const CandidatePool& pool, const MetricMeasureSpace& space) {
  const auto& F = pool.target;
  double resolution = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pool.balls.size(); ++i)
    if (pool.balls[i].members.size() >= 2) resolution = std::min(resolution, pool.scales[i]);
  if (!std::isfinite(resolution)) return {0.0, 0.0};
  switch (pool.flavor) {
    case HausdorffFlavor::metric:
      return {2.0 * resolution, diameter(space, F) / 4.0};
    case HausdorffFlavor::delta:
      return {2.0 * resolution, delta_diameter_of(*pool.table, F) / 4.0};
    case HausdorffFlavor::mu_relative: {
      double best = std::numeric_limits<double>::infinity();
      const Neighborhoods hood(space, F);
      for (PointId z : F) {
        double reach = 0.0;
        for (PointId f : F) reach = std::max(reach, space.distance(z, f));
        best = std::min(best, hood.closed_mass(z, reach));
      }
      return {2.0 * resolution, best / 4.0};
    }
  }
  return {0.0, 0.0};
}

std::pair<double, double> mesoscopic_range(const MetricMeasureSpace& space, const DeltaTable* table,
                                           std::span<const PointId> target, HausdorffFlavor flavor,
                                           const CandidateOptions& options) {
  return mesoscopic_range(candidate_pool(space, table, target, flavor, options), space);
}

namespace {

/// Least-squares slope of log(upper) against log(1/rho).
double curve_slope(const DimensionCurve& curve) {
  std::vector<double> x, y;
  for (const auto& p : curve.points) {
    x.push_back(-std::log(p.rho));
    y.push_back(std::log(p.upper));
  }
  const double slope = least_squares_slope(x, y).first;
  return std::fabs(slope) < 1e-9 ? 0.0 : slope;  // flat curves in floating point
}

}  // namespace

DimensionEstimate dimension_estimate(const MetricMeasureSpace& space, const DeltaTable* table,
                                     std::span<const PointId> target, HausdorffFlavor flavor,
                                     const DimensionOptions& options) {
  const auto F = checked_target(space, target);
  DimensionEstimate est;
  est.flavor = flavor;
  est.method = options.method;
  if (F.size() == 1) return est;

  const CandidatePool pool = candidate_pool(space, table, F, flavor, options.candidates);
  auto [lo, hi] = mesoscopic_range(pool, space);
  if (options.rho_lo > 0.0) lo = options.rho_lo;
  if (options.rho_hi > 0.0) hi = options.rho_hi;
  if (!(lo > 0.0 && lo < hi) || options.rho_count < 3)
    throw PreconditionError("degenerate scaling range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                            "]: the set is too small for a dimension estimate");
  est.rho_lo = lo;
  est.rho_hi = hi;
  est.sanity_cap = std::log(double(F.size())) / std::log(4.0 * hi / lo);
  const auto grid = log_spaced(lo, hi, options.rho_count);

  if (options.method == DimensionMethod::regression) {
    est.curves.push_back(dimension_curve(pool, space, 0.0, grid, options.limits));
    std::vector<double> x, y;
    for (const auto& p : est.curves.back().points) {
      x.push_back(-std::log(p.rho));
      y.push_back(std::log(p.upper));
    }
    const auto [slope, residual] = least_squares_slope(x, y);
    est.s_star = std::max(0.0, slope);
    est.residual = residual;
    est.bracket_lo = est.bracket_hi = est.s_star;
    return est;
  }

  const auto slope_at = [&](double s) {
    est.curves.push_back(dimension_curve(pool, space, s, grid, options.limits));
    return curve_slope(est.curves.back());
  };
  double s_lo = 0.0;
  if (slope_at(0.0) <= 0.0) return est;
  double s_hi = std::max(1.0, est.sanity_cap);
  while (slope_at(s_hi) > 0.0) {
    s_lo = s_hi;
    s_hi *= 2.0;
    if (s_hi > 64.0) throw PreconditionError("premeasure slope stays positive up to s = 64");
  }
  while (s_hi - s_lo > options.bracket_width) {
    const double mid = 0.5 * (s_lo + s_hi);
    (slope_at(mid) <= 0.0 ? s_hi : s_lo) = mid;
  }
  est.bracket_lo = s_lo;
  est.bracket_hi = s_hi;
  est.s_star = 0.5 * (s_lo + s_hi);
  std::sort(est.curves.begin(), est.curves.end(),
            [](const DimensionCurve& a, const DimensionCurve& b) { return a.s < b.s; });
  return est;
}

EquivalenceReport equivalence_ratio_H_G(const MetricMeasureSpace& space, const DeltaTable& table,
                                        std::span<const PointId> target, double s, std::span<const double> rho_grid,
                                        double C1, double C2, double slack, const CandidateOptions& options) {
  const CandidatePool H = candidate_pool(space, nullptr, target, HausdorffFlavor::mu_relative, options);
  const CandidatePool G = candidate_pool(space, &table, target, HausdorffFlavor::delta, options);
  EquivalenceReport rep;
  rep.s = s;
  rep.slack = slack;
  rep.predicted_lo = std::pow(C1, s);
  rep.predicted_hi = std::pow(C2, s);
  rep.ratio_min = rep.cross_min = std::numeric_limits<double>::infinity();
  for (double rho : rho_grid) {
    const auto h = premeasure(H, space, s, rho);
    const auto g = premeasure(G, space, s, rho);
    const double ratio = h.upper / g.upper;
    rep.rho.push_back(rho);
    rep.ratios.push_back(ratio);
    rep.ratio_min = std::min(rep.ratio_min, ratio);
    rep.ratio_max = std::max(rep.ratio_max, ratio);
    rep.cross_min = std::min(rep.cross_min, h.lower / g.upper);
    rep.cross_max = std::max(rep.cross_max, g.lower > 0.0 ? h.upper / g.lower : std::numeric_limits<double>::infinity());
  }
  rep.within = !rep.ratios.empty() && rep.ratio_min >= rep.predicted_lo / slack && rep.ratio_max <= rep.predicted_hi * slack;
  return rep;
}

}  // namespace homtype
