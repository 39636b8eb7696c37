#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "homtype/space.hpp"

namespace homtype {

/// Configuration constants for the structural estimators.
struct EstimatorLimits {
  /// Balls with at most this many points get an exact maximum disperse search.
  std::size_t exact_disperse_ball_limit = 20;
  /// Above this many points the triangle constant is sampled unless exact is forced.
  std::size_t triangle_exact_limit = 300;
  std::size_t triangle_sample_count = 200000;
};

enum class TriangleMode { automatic, exact, sampled };

struct TriangleOptions {
  TriangleMode mode = TriangleMode::automatic;
  std::uint64_t seed = 0;
  EstimatorLimits limits{};
};

struct TriangleEstimate {
  double K = 1.0;
  /// Sampled estimates are lower bounds on the true constant.
  bool lower_bound = false;
  std::array<PointId, 3> witness{0, 0, 0};  // (x, y, z)
  std::size_t audited = 0;
};

/// K = max over audited triples of d(x,y) / (d(x,z) + d(z,y)), floored at 1.
TriangleEstimate estimate_triangle_constant(const MetricMeasureSpace& space,
                                            const TriangleOptions& options = {});

struct DoublingEstimate {
  double A = 1.0;
  PointId witness_center = 0;
  double witness_radius = 0.0;
  std::size_t audited = 0;
};

/// mass(B(x,2r)) / mass(B(x,r)) with the positive-denominator convention.
double doubling_ratio(const MetricMeasureSpace& space, PointId center, double radius);

/// A = max over centers and radii of doubling_ratio, floored at 1. An empty grid
/// audits every per-center breakpoint (own distances and their halves), which
/// attains the supremum over all r > 0. An empty center list means all points.
DoublingEstimate estimate_doubling_constant(const MetricMeasureSpace& space,
                                            std::span<const double> radius_grid = {},
                                            std::span<const PointId> centers = {});

struct MetricDimensionOptions {
  EstimatorLimits limits{};
  /// Radius grid entries kept after log thinning; 0 keeps all.
  std::size_t max_radii = 96;
  /// Centers audited; 0 audits all, otherwise a seeded sample.
  std::size_t max_centers = 0;
  std::uint64_t seed = 0;
};

struct MetricDimensionEstimate {
  std::size_t N = 1;
  PointId witness_center = 0;
  double witness_radius = 0.0;
  /// False when some audited ball fell back to the greedy lower bound.
  bool exact = true;
  bool sampled = false;
};

/// N = max over (x, r) of the largest r-disperse subset of B(x, 2r).
MetricDimensionEstimate estimate_metric_dimension(const MetricMeasureSpace& space,
                                                  std::span<const double> radius_grid = {},
                                                  const MetricDimensionOptions& options = {});

/// Largest r-disperse subset of `ids` under `space`: exact when |ids| is within
/// the limit, greedy otherwise (then *exact is set false).
std::size_t max_disperse_size(const MetricMeasureSpace& space, std::span<const PointId> ids,
                              double t, const EstimatorLimits& limits = {},
                              bool* exact = nullptr);

/// Smallest integer e >= 0 with 2^e >= value (tolerant to rounding noise).
int smallest_power_of_two_exponent(double value);

struct StructureConstants {
  double K = 1.0;
  double A = 1.0;
  std::size_t N = 1;
  /// Smallest integer with 3K^2 <= 2^ell (ball-to-delta-ball containment).
  int ell = 2;
  /// Smallest integer with 8K^3 <= 2^ell_diameter (delta-diameter comparison).
  int ell_diameter = 3;
  bool sampled = false;
};

StructureConstants make_structure_constants(double K, double A, std::size_t N, bool sampled);

struct StructureOptions {
  TriangleOptions triangle{};
  MetricDimensionOptions dimension{};
};

StructureConstants estimate_structure_constants(const MetricMeasureSpace& space,
                                                const StructureOptions& options = {});

}  // namespace homtype
