#include "homtype/structure.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "detail/kernels.hpp"
#include "homtype/error.hpp"
#include "homtype/neighborhoods.hpp"
#include "homtype/parallel.hpp"

namespace homtype {

TriangleEstimate estimate_triangle_constant(const MetricMeasureSpace& space, const TriangleOptions& options) {
  const std::size_t n = space.size();
  if (n < 2) return {};
  const bool exact = options.mode == TriangleMode::exact ||
                     (options.mode == TriangleMode::automatic && n <= options.limits.triangle_exact_limit);
  if (exact) {
    const std::vector<double> dense = space.distance_matrix();
    return detail::triangle_exact_dense(dense, n);
  }
  return detail::triangle_sampled(
      n, [&](PointId a, PointId b) { return space.distance(a, b); }, options.limits.triangle_sample_count,
      options.seed);
}

double doubling_ratio(const MetricMeasureSpace& space, PointId center, double radius) {
  space.check_id(center);
  return ball_mass_denominator(space, center, 2.0 * radius) / ball_mass_denominator(space, center, radius);
}

DoublingEstimate estimate_doubling_constant(const MetricMeasureSpace& space, std::span<const double> radius_grid,
                                            std::span<const PointId> centers) {
  std::vector<PointId> ids = centers.empty() ? all_points(space) : normalize_subset(space, centers);
  std::vector<DoublingEstimate> local(ids.size());
  parallel_for(ids.size(), [&](std::size_t k) {
    const PointId x = ids[k];
    const Neighborhoods hood(space, std::span<const PointId>(&x, 1));
    const double w = space.weight(x);
    std::vector<double> radii;
    if (radius_grid.empty()) {
      for (double d : hood.distinct_distances(x)) {
        radii.push_back(d);
        radii.push_back(0.5 * d);
      }
    } else {
      radii.assign(radius_grid.begin(), radius_grid.end());
    }
    DoublingEstimate best;
    best.witness_center = x;
    for (double r : radii) {
      if (!(r > 0.0)) continue;
      const double small = std::max(hood.open_mass(x, r), w);
      const double big = std::max(hood.open_mass(x, 2.0 * r), w);
      const double ratio = big / small;
      ++best.audited;
      if (ratio > best.A) {
        best.A = ratio;
        best.witness_radius = r;
      }
    }
    local[k] = best;
  });
  DoublingEstimate out;
  for (const auto& e : local) {
    out.audited += e.audited;
    if (e.A > out.A) {
      out.A = e.A;
      out.witness_center = e.witness_center;
      out.witness_radius = e.witness_radius;
    }
  }
  return out;
}

std::size_t max_disperse_size(const MetricMeasureSpace& space, std::span<const PointId> ids, double t,
                              const EstimatorLimits& limits, bool* exact) {
  if (!(t > 0.0)) throw PreconditionError("dispersion threshold must be positive");
  return detail::max_disperse(
      ids, [&](PointId a, PointId b) { return space.distance(a, b); }, t, limits.exact_disperse_ball_limit, exact);
}

MetricDimensionEstimate estimate_metric_dimension(const MetricMeasureSpace& space, std::span<const double> radius_grid,
                                                  const MetricDimensionOptions& options) {
  const std::vector<PointId> everyone = all_points(space);
  const std::vector<PointId> centers = detail::sample_ids(everyone, options.max_centers, options.seed);
  MetricDimensionEstimate out;
  out.sampled = centers.size() < everyone.size();

  std::vector<double> grid;
  if (!radius_grid.empty()) {
    grid.assign(radius_grid.begin(), radius_grid.end());
  } else if (space.size() <= 2000) {
    grid = default_radius_grid(space);
  } else {
    const Neighborhoods hood(space, centers);
    for (PointId c : centers)
      for (double d : hood.distinct_distances(c)) {
        grid.push_back(d);
        grid.push_back(0.5 * d);
      }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }
  const std::vector<double> thinned = thin_log_grid(grid, options.max_radii);
  if (thinned.size() < grid.size()) out.sampled = true;

  std::vector<MetricDimensionEstimate> local(centers.size());
  const auto dist = [&](PointId a, PointId b) { return space.distance(a, b); };
  parallel_for(centers.size(), [&](std::size_t k) {
    const PointId x = centers[k];
    const Neighborhoods hood(space, std::span<const PointId>(&x, 1));
    MetricDimensionEstimate best;
    best.witness_center = x;
    for (double r : thinned) {
      if (!(r > 0.0)) continue;
      const auto members = hood.open_members(x, 2.0 * r);
      bool exact = true;
      const std::size_t count =
          detail::max_disperse(members, dist, r, options.limits.exact_disperse_ball_limit, &exact);
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

int smallest_power_of_two_exponent(double value) {
  int e = 0;
  // Relative slack absorbs rounding in K^2, K^3 for K = 1 exactly.
  while (std::ldexp(1.0, e) < value * (1.0 - 1e-12)) ++e;
  return e;
}

StructureConstants make_structure_constants(double K, double A, std::size_t N, bool sampled) {
  if (K < 1.0 || A < 1.0 || N < 1) throw InvariantViolation("structure constants below their floors");
  StructureConstants c;
  c.K = K;
  c.A = A;
  c.N = N;
  c.ell = smallest_power_of_two_exponent(3.0 * K * K);
  c.ell_diameter = std::max(1, smallest_power_of_two_exponent(8.0 * K * K * K));
  c.sampled = sampled;
  return c;
}

StructureConstants estimate_structure_constants(const MetricMeasureSpace& space, const StructureOptions& options) {
  const auto k = estimate_triangle_constant(space, options.triangle);
  const auto a = estimate_doubling_constant(space);
  const auto n = estimate_metric_dimension(space, {}, options.dimension);
  return make_structure_constants(k.K, a.A, n.N, k.lower_bound || n.sampled || !n.exact);
}

}  // namespace homtype
