#include "homtype/normalization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "detail/kernels.hpp"
#include "homtype/error.hpp"
#include "homtype/neighborhoods.hpp"
#include "homtype/parallel.hpp"

namespace homtype {

namespace {

constexpr std::size_t kOpenConventionLimit = 2000;
constexpr std::size_t kCenterBlock = 64;

/// Mass of the smallest candidate ball around the row's center containing each point.
void level_masses(const Neighborhoods::Row& row, DeltaConvention convention, std::span<const double> grid,
                  double* out) {
  const std::size_t n = row.order.size();
  if (convention == DeltaConvention::closed) {
    std::size_t k = 0;
    while (k < n) {
      std::size_t e = k;
      while (e < n && row.distance[e] == row.distance[k]) ++e;
      const double mass = row.prefix_mass[e];
      for (std::size_t j = k; j < e; ++j) out[row.order[j]] = mass;
      k = e;
    }
    return;
  }
  std::size_t g = 0;
  std::size_t end = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = row.distance[k];
    while (g < grid.size() && grid[g] <= d) ++g;
    const double radius = g < grid.size() ? grid[g] : std::numeric_limits<double>::infinity();
    if (end <= k) end = k + 1;
    while (end < n && row.distance[end] < radius) ++end;
    out[row.order[k]] = row.prefix_mass[end];
  }
}

std::vector<double> open_grid(const MetricMeasureSpace& space) {
  if (space.size() > kOpenConventionLimit)
    throw LimitExceeded("open delta convention supports at most " + std::to_string(kOpenConventionLimit) +
                        " points");
  return default_radius_grid(space);
}

/// delta row of one center sorted ascending, with prefix masses.
struct SortedDeltaRow {
  std::vector<double> value;
  std::vector<double> prefix;

  SortedDeltaRow(const MetricMeasureSpace& space, std::span<const double> row) {
    std::vector<std::pair<double, double>> keyed(row.size());
    for (std::size_t y = 0; y < row.size(); ++y) keyed[y] = {row[y], space.weight(PointId(y))};
    std::sort(keyed.begin(), keyed.end());
    value.resize(keyed.size());
    prefix.assign(keyed.size() + 1, 0.0);
    for (std::size_t k = 0; k < keyed.size(); ++k) {
      value[k] = keyed[k].first;
      prefix[k + 1] = prefix[k] + keyed[k].second;
    }
  }

  std::size_t count_below(double r) const {
    return std::size_t(std::lower_bound(value.begin(), value.end(), r) - value.begin());
  }
  double mass_below(double r) const { return prefix[count_below(r)]; }
};

SandwichResult sandwich_from_row(const MetricMeasureSpace& space, std::span<const double> drow,
                                 const Neighborhoods::Row& hood, PointId x, double r) {
  const std::size_t n = hood.order.size();
  const double far = hood.distance.back();
  SandwichResult s;
  double a = std::numeric_limits<double>::infinity();
  double farthest_member = 0.0;
  std::size_t members = 0;
  for (PointId y = 0; y < n; ++y) {
    const double d = space.distance(x, y);
    if (drow[y] < r) {
      farthest_member = std::max(farthest_member, d);
      s.delta_mass += space.weight(y);
      ++members;
    } else {
      a = std::min(a, d);
    }
  }
  s.degenerate = members == 1;
  s.a = std::isinf(a) ? 2.0 * far : a;
  const auto next = std::upper_bound(hood.distance.begin(), hood.distance.end(), farthest_member);
  s.b = next == hood.distance.end() ? 2.0 * far : *next;
  const auto mass_of = [&](double radius) {
    const auto k = std::lower_bound(hood.distance.begin(), hood.distance.end(), radius) - hood.distance.begin();
    return hood.prefix_mass[std::size_t(k)];
  };
  s.mass_a = mass_of(s.a);
  s.mass_b = mass_of(s.b);

  bool ok = true;
  for (PointId y = 0; y < n && ok; ++y) {
    const double d = space.distance(x, y);
    const bool in_delta = drow[y] < r;
    if (d < s.a && !in_delta) ok = false;
    if (in_delta && !(d < s.b)) ok = false;
  }
  s.contained = ok;
  return s;
}

}  // namespace

const char* to_string(DeltaConvention convention) noexcept {
  return convention == DeltaConvention::closed ? "closed" : "open";
}

DeltaTable DeltaTable::compute(const MetricMeasureSpace& space, DeltaConvention convention) {
  const std::vector<PointId> everyone = all_points(space);
  return compute_rows(space, everyone, convention);
}

DeltaTable DeltaTable::compute_rows(const MetricMeasureSpace& space, std::span<const PointId> sources,
                                    DeltaConvention convention) {
  const std::size_t n = space.size();
  DeltaTable t;
  t.space_ = &space;
  t.convention_ = convention;
  t.sources_ = normalize_subset(space, sources);
  t.slot_.assign(n, -1);
  for (std::size_t k = 0; k < t.sources_.size(); ++k) t.slot_[t.sources_[k]] = int(k);
  const std::size_t rows = t.sources_.size();
  t.values_.assign(rows * n, std::numeric_limits<double>::infinity());

  const std::vector<double> grid = convention == DeltaConvention::open ? open_grid(space) : std::vector<double>{};
  std::vector<double> levels;
  for (std::size_t z0 = 0; z0 < n; z0 += kCenterBlock) {
    const std::size_t z1 = std::min(n, z0 + kCenterBlock);
    std::vector<PointId> block(z1 - z0);
    std::iota(block.begin(), block.end(), PointId(z0));
    const Neighborhoods hood(space, block);
    levels.assign(block.size() * n, 0.0);
    parallel_for(block.size(), [&](std::size_t b) {
      level_masses(hood.row(block[b]), convention, grid, levels.data() + b * n);
    });
    parallel_for(rows, [&](std::size_t s) {
      const PointId x = t.sources_[s];
      double* out = t.values_.data() + s * n;
      for (std::size_t b = 0; b < block.size(); ++b) {
        const double* m = levels.data() + b * n;
        const double mx = m[x];
        for (std::size_t y = 0; y < n; ++y) out[y] = std::min(out[y], std::max(mx, m[y]));
      }
    });
  }
  for (std::size_t s = 0; s < rows; ++s) t.values_[s * n + t.sources_[s]] = 0.0;
  return t;
}

std::span<const double> DeltaTable::row(PointId x) const {
  if (!has_row(x)) throw PreconditionError("delta row for point " + std::to_string(x) + " was not computed");
  const std::size_t n = size();
  return {values_.data() + std::size_t(slot_[x]) * n, n};
}

double DeltaTable::operator()(PointId x, PointId y) const {
  if (has_row(x)) return row(x)[y];
  if (has_row(y)) return row(y)[x];
  throw PreconditionError("delta(" + std::to_string(x) + ", " + std::to_string(y) + ") needs a computed row");
}

std::span<const double> DeltaTable::dense() const {
  if (!is_full()) throw PreconditionError("operation needs the full delta table");
  return values_;
}

double DeltaTable::min_positive() const {
  double best = std::numeric_limits<double>::infinity();
  for (double v : values_)
    if (v > 0.0 && v < best) best = v;
  return best;
}

DeltaTable compute_delta(const MetricMeasureSpace& space, DeltaConvention convention) {
  return DeltaTable::compute(space, convention);
}

BallResult ball_query(const DeltaTable& table, const BallSpec& ball) {
  const MetricMeasureSpace& space = table.space();
  if (ball.flavor == BallFlavor::d) return ball_query(space, ball);
  space.check_id(ball.center);
  if (!(ball.radius >= 0.0)) throw PreconditionError("ball radius must be nonnegative");
  const auto row = table.row(ball.center);
  BallResult out;
  for (PointId y = 0; y < space.size(); ++y) {
    const bool in = ball.closure == Closure::open ? row[y] < ball.radius : row[y] <= ball.radius;
    if (in) {
      out.members.push_back(y);
      out.mass += space.weight(y);
    }
  }
  return out;
}

BallResult delta_ball(const DeltaTable& table, PointId x, double r, bool verify) {
  if (!(r > 0.0)) throw PreconditionError("delta ball radius must be positive");
  BallResult out = ball_query(table, BallSpec{x, r, BallFlavor::delta, Closure::open});
  if (verify) {
    const BallResult check = delta_ball_by_union(table.space(), table.convention(), x, r);
    if (check.members != out.members)
      throw InvariantViolation("delta ball mismatch at x=" + std::to_string(x) + ", r=" + std::to_string(r) +
                               " (" + to_string(table.convention()) + " convention)");
  }
  return out;
}

BallResult delta_ball_by_union(const MetricMeasureSpace& space, DeltaConvention convention, PointId x, double r) {
  space.check_id(x);
  const std::size_t n = space.size();
  const std::vector<double> grid = convention == DeltaConvention::open ? open_grid(space) : std::vector<double>{};
  std::vector<char> in(n, 0);
  std::vector<std::pair<double, PointId>> keyed(n);
  for (PointId z = 0; z < n; ++z) {
    for (PointId w = 0; w < n; ++w) keyed[w] = {space.distance(z, w), w};
    std::sort(keyed.begin(), keyed.end());
    // Radii of the candidate family around z, ascending.
    std::vector<double> radii;
    if (convention == DeltaConvention::closed) {
      for (const auto& [d, w] : keyed)
        if (radii.empty() || d != radii.back()) radii.push_back(d);
    } else {
      radii = grid;
    }
    const double dx = space.distance(z, x);
    std::size_t take = 0;
    bool found = false;
    double mass = 0.0;
    std::size_t count = 0;
    for (double radius : radii) {
      const auto inside = [&](double d) {
        return convention == DeltaConvention::closed ? d <= radius : d < radius;
      };
      while (count < n && inside(keyed[count].first)) mass += space.weight(keyed[count++].second);
      if (!(mass < r)) break;
      if (inside(dx)) {
        take = count;
        found = true;
      }
    }
    if (found)
      for (std::size_t k = 0; k < take; ++k) in[keyed[k].second] = 1;
  }
  in[x] = 1;  // delta(x, x) = 0 even when the atom at x alone has mass >= r
  BallResult out;
  for (PointId y = 0; y < n; ++y)
    if (in[y]) {
      out.members.push_back(y);
      out.mass += space.weight(y);
    }
  return out;
}

TriangleEstimate estimate_triangle_constant(const DeltaTable& table, const TriangleOptions& options) {
  const std::size_t n = table.size();
  const auto dense = table.dense();
  if (n < 2) return {};
  const bool exact = options.mode == TriangleMode::exact ||
                     (options.mode == TriangleMode::automatic && n <= options.limits.triangle_exact_limit);
  if (exact) return detail::triangle_exact_dense(dense, n);
  return detail::triangle_sampled(
      n, [&](PointId a, PointId b) { return dense[std::size_t(a) * n + b]; }, options.limits.triangle_sample_count,
      options.seed);
}

MetricDimensionEstimate estimate_metric_dimension(const DeltaTable& table, std::span<const double> radius_grid,
                                                  const MetricDimensionOptions& options) {
  const std::size_t n = table.size();
  const auto dense = table.dense();
  const std::vector<PointId> everyone = all_points(table.space());
  const std::vector<PointId> centers = detail::sample_ids(everyone, options.max_centers, options.seed);
  MetricDimensionEstimate out;
  out.sampled = centers.size() < everyone.size();

  std::vector<double> grid;
  if (!radius_grid.empty()) {
    grid.assign(radius_grid.begin(), radius_grid.end());
  } else {
    for (PointId c : centers)
      for (PointId y = 0; y < n; ++y) {
        const double v = dense[std::size_t(c) * n + y];
        if (v > 0.0) {
          grid.push_back(v);
          grid.push_back(0.5 * v);
        }
      }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }
  const std::vector<double> thinned = thin_log_grid(grid, options.max_radii);
  if (thinned.size() < grid.size()) out.sampled = true;

  const auto dist = [&](PointId a, PointId b) { return dense[std::size_t(a) * n + b]; };
  std::vector<MetricDimensionEstimate> local(centers.size());
  parallel_for(centers.size(), [&](std::size_t k) {
    const PointId x = centers[k];
    std::vector<std::pair<double, PointId>> keyed(n);
    for (PointId y = 0; y < n; ++y) keyed[y] = {dist(x, y), y};
    std::sort(keyed.begin(), keyed.end());
    MetricDimensionEstimate best;
    best.witness_center = x;
    std::vector<PointId> members;
    for (double r : thinned) {
      if (!(r > 0.0)) continue;
      members.clear();
      for (const auto& [v, y] : keyed) {
        if (!(v < 2.0 * r)) break;
        members.push_back(y);
      }
      bool exact = true;
      const std::size_t count = detail::max_disperse(members, dist, r, options.limits.exact_disperse_ball_limit, &exact);
      best.exact = best.exact && exact;
      if (count > best.N) {
        best.N = count;
        best.witness_radius = r;
      }
    }
    local[k] = best;
  });
  for (const auto& e : local) {
    out.exact = out.exact && e.exact;
    if (e.N > out.N) {
      out.N = e.N;
      out.witness_center = e.witness_center;
      out.witness_radius = e.witness_radius;
    }
  }
  return out;
}

double delta_diameter(const DeltaTable& table, std::span<const PointId> subset) {
  const std::vector<PointId> ids = normalize_subset(table.space(), subset);
  double best = 0.0;
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j) best = std::max(best, table(ids[i], ids[j]));
  return best;
}

NormalityReport normality_constants(const DeltaTable& table, const NormalityOptions& options) {
  const MetricMeasureSpace& space = table.space();
  if (space.size() < 2) throw PreconditionError("normality needs at least two points");
  std::vector<PointId> pool = options.centers.empty() ? table.sources() : normalize_subset(space, options.centers);
  const std::vector<PointId> centers = detail::sample_ids(pool, options.max_centers, options.seed);
  for (PointId c : centers)
    if (!table.has_row(c)) throw PreconditionError("normality center " + std::to_string(c) + " has no delta row");

  double lo = options.r_lo;
  if (!(lo > 0.0)) {
    lo = std::numeric_limits<double>::infinity();
    for (PointId c : centers)
      for (double v : table.row(c))
        if (v > 0.0) lo = std::min(lo, v);
  }
  const double hi = options.r_hi > 0.0 ? options.r_hi : 2.0 * space.total_mass();
  if (!(lo < hi) || options.radius_count == 0) throw PreconditionError("empty admissible radius range for normality");

  std::vector<double> radii(options.radius_count);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (std::size_t k = 0; k < radii.size(); ++k)
    radii[k] = std::exp(llo + (lhi - llo) * (double(k) + 0.5) / double(radii.size()));

  struct Local {
    std::vector<NormalitySample> samples;
    double s_lo = std::numeric_limits<double>::infinity();
    double s_hi = 0.0;
    std::size_t degenerate = 0;
  };
  std::vector<Local> local(centers.size());
  parallel_for(centers.size(), [&](std::size_t k) {
    const PointId x = centers[k];
    const auto drow = table.row(x);
    const SortedDeltaRow sorted(space, drow);
    const Neighborhoods hood(space, std::span<const PointId>(&x, 1));
    Local& out = local[k];
    for (double r : radii) {
      out.samples.push_back({x, r, sorted.mass_below(r) / r});
      const SandwichResult s = sandwich_from_row(space, drow, hood.row(x), x, r);
      if (!s.contained) throw InvariantViolation("sandwich containment failed at x=" + std::to_string(x));
      if (s.degenerate) {
        ++out.degenerate;
        continue;
      }
      out.s_lo = std::min(out.s_lo, s.mass_a / r);
      out.s_hi = std::max(out.s_hi, s.mass_b / r);
    }
  });

  NormalityReport rep;
  rep.r_min = lo;
  rep.r_max = hi;
  rep.C1 = std::numeric_limits<double>::infinity();
  rep.sandwich_C1 = std::numeric_limits<double>::infinity();
  for (auto& l : local) {
    for (const auto& s : l.samples) {
      if (s.ratio < rep.C1) {
        rep.C1 = s.ratio;
        rep.witness_low = s;
      }
      if (s.ratio > rep.C2) {
        rep.C2 = s.ratio;
        rep.witness_high = s;
      }
      rep.samples.push_back(s);
    }
    rep.sandwich_C1 = std::min(rep.sandwich_C1, l.s_lo);
    rep.sandwich_C2 = std::max(rep.sandwich_C2, l.s_hi);
    rep.degenerate += l.degenerate;
  }
  if (std::isinf(rep.sandwich_C1)) rep.sandwich_C1 = 0.0;
  return rep;
}

SandwichResult sandwich_radii(const DeltaTable& table, PointId x, double r) {
  const MetricMeasureSpace& space = table.space();
  space.check_id(x);
  if (space.size() < 2) throw PreconditionError("sandwich radii need at least two points");
  if (!(r > 0.0 && r < 2.0 * space.total_mass())) throw PreconditionError("sandwich radius must lie in (0, 2 mass(X))");
  const Neighborhoods hood(space, std::span<const PointId>(&x, 1));
  return sandwich_from_row(space, table.row(x), hood.row(x), x, r);
}

SandwichSlack sandwich_slack(const SandwichResult& s, double r, double C1, double C2) {
  SandwichSlack out;
  if (s.mass_a > 0.0) out.low = std::max(1.0, C1 * r / s.mass_a);
  if (C2 > 0.0) out.high = std::max(1.0, s.mass_b / (C2 * r));
  return out;
}

DiameterBounds delta_diameter_bounds(const DeltaTable& table, std::span<const PointId> subset,
                                     const StructureConstants& constants, PointId anchor) {
  const MetricMeasureSpace& space = table.space();
  const std::vector<PointId> ids = normalize_subset(space, subset);
  if (ids.empty()) throw PreconditionError("delta diameter bounds need a nonempty set");
  if (!std::binary_search(ids.begin(), ids.end(), anchor)) throw PreconditionError("anchor must belong to the set");
  DiameterBounds out;
  if (ids.size() == 1) {
    out.vacuous = true;
    return out;
  }
  out.diam_delta = delta_diameter(table, ids);
  out.diam_d = diameter(space, ids);
  out.ball_mass = open_ball_mass(space, anchor, out.diam_d);
  out.lower = std::pow(constants.A, -double(constants.ell_diameter)) * out.ball_mass;
  out.upper = constants.A * out.ball_mass;
  const double tol = 1e-12 * out.ball_mass;
  out.holds = out.lower <= out.diam_delta + tol && out.diam_delta <= out.upper + tol;
  return out;
}

DiameterBounds delta_diameter_bounds(const DeltaTable& table, std::span<const PointId> subset,
                                     const StructureConstants& constants) {
  const std::vector<PointId> ids = normalize_subset(table.space(), subset);
  if (ids.empty()) throw PreconditionError("delta diameter bounds need a nonempty set");
  return delta_diameter_bounds(table, ids, constants, ids.front());
}

}  // namespace homtype
