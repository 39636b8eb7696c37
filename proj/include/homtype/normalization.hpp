#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "homtype/space.hpp"
#include "homtype/structure.hpp"

namespace homtype {

/// Which d-balls compete in the infimum defining delta.
///  closed: closed balls B[z, d(z,w)] for z, w in X (every realizable ball).
///  open:   open balls B(z, g) with g on the global radius grid
///          (distinct distances, halves, doubles).
enum class DeltaConvention { closed, open };

const char* to_string(DeltaConvention convention) noexcept;

/// Quasi-distance delta(x, y) = min mass of a candidate d-ball containing x and
/// y (0 on the diagonal), in mass units. Rows are materialized for a set of
/// source points, all of X by default. The table keeps a pointer to its space,
/// which must outlive it.
class DeltaTable {
 public:
  static DeltaTable compute(const MetricMeasureSpace& space, DeltaConvention convention = DeltaConvention::closed);
  static DeltaTable compute_rows(const MetricMeasureSpace& space, std::span<const PointId> sources,
                                 DeltaConvention convention = DeltaConvention::closed);

  const MetricMeasureSpace& space() const noexcept { return *space_; }
  DeltaConvention convention() const noexcept { return convention_; }
  std::size_t size() const noexcept { return slot_.size(); }
  bool is_full() const noexcept { return sources_.size() == size(); }
  bool has_row(PointId x) const noexcept { return x < slot_.size() && slot_[x] >= 0; }
  const std::vector<PointId>& sources() const noexcept { return sources_; }

  std::span<const double> row(PointId x) const;
  /// Needs a row for x or for y.
  double operator()(PointId x, PointId y) const;
  /// The full n*n table; throws unless is_full().
  std::span<const double> dense() const;

  /// Smallest positive entry over the stored rows.
  double min_positive() const;

 private:
  const MetricMeasureSpace* space_ = nullptr;
  DeltaConvention convention_ = DeltaConvention::closed;
  std::vector<PointId> sources_;
  std::vector<int> slot_;
  std::vector<double> values_;
};

DeltaTable compute_delta(const MetricMeasureSpace& space, DeltaConvention convention = DeltaConvention::closed);

/// Ball query for both flavors; delta balls need a row for the center.
BallResult ball_query(const DeltaTable& table, const BallSpec& ball);

/// Open delta ball {y : delta(x, y) < r}. With verify set, the set is rebuilt as
/// the union of candidate d-balls containing x with mass < r, and a mismatch
/// throws InvariantViolation.
BallResult delta_ball(const DeltaTable& table, PointId x, double r, bool verify = false);

/// Union-of-small-balls construction of the delta ball, by direct enumeration
/// of the candidate family (independent of the table).
BallResult delta_ball_by_union(const MetricMeasureSpace& space, DeltaConvention convention, PointId x, double r);

/// Triangle constant of delta (needs a full table).
TriangleEstimate estimate_triangle_constant(const DeltaTable& table, const TriangleOptions& options = {});

/// Metric dimension with respect to delta (needs a full table).
MetricDimensionEstimate estimate_metric_dimension(const DeltaTable& table, std::span<const double> radius_grid = {},
                                                  const MetricDimensionOptions& options = {});

double delta_diameter(const DeltaTable& table, std::span<const PointId> subset);

struct NormalityOptions {
  /// Radius range in mass units. Zero picks the defaults: smallest positive delta
  /// and twice the total mass.
  double r_lo = 0.0;
  double r_hi = 0.0;
  std::size_t radius_count = 24;
  /// Centers to audit; empty means every row of the table.
  std::vector<PointId> centers;
  std::size_t max_centers = 0;
  std::uint64_t seed = 0;
};

struct NormalitySample {
  PointId x = 0;
  double r = 0.0;
  double ratio = 0.0;  // mass(B_delta(x, r)) / r
};

struct NormalityReport {
  double C1 = 0.0;
  double C2 = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  std::vector<NormalitySample> samples;
  NormalitySample witness_low;
  NormalitySample witness_high;
  /// Sandwich constants: min mass(B(x,a))/r and max mass(B(x,b))/r over the
  /// non-degenerate samples.
  double sandwich_C1 = 0.0;
  double sandwich_C2 = 0.0;
  std::size_t degenerate = 0;
};

NormalityReport normality_constants(const DeltaTable& table, const NormalityOptions& options = {});

struct SandwichResult {
  double a = 0.0;
  double b = 0.0;
  double mass_a = 0.0;
  double mass_b = 0.0;
  double delta_mass = 0.0;
  /// B_delta(x, r) = {x}: radius below resolution.
  bool degenerate = false;
  /// B(x,a) within B_delta(x,r) within B(x,b), re-checked from raw memberships.
  bool contained = false;
};

/// Largest a and smallest b (open d-balls, radii from the distances out of x)
/// with B(x,a) within B_delta(x,r) within B(x,b). Requires 0 < r < 2 mass(X).
SandwichResult sandwich_radii(const DeltaTable& table, PointId x, double r);

/// Slack factors needed for the sandwich masses to sit in [C1 r, C2 r].
struct SandwichSlack {
  double low = 1.0;
  double high = 1.0;
};
SandwichSlack sandwich_slack(const SandwichResult& s, double r, double C1, double C2);

struct DiameterBounds {
  double diam_delta = 0.0;
  double diam_d = 0.0;
  double ball_mass = 0.0;  // mass(B(anchor, diam_d))
  double lower = 0.0;      // A^{-ell_diameter} * ball_mass
  double upper = 0.0;      // A * ball_mass
  bool holds = true;
  bool vacuous = false;
};

/// Two-sided comparison of the delta-diameter of E with the mass of
/// B(anchor, diam E). The table needs rows covering E.
DiameterBounds delta_diameter_bounds(const DeltaTable& table, std::span<const PointId> subset,
                                     const StructureConstants& constants, PointId anchor);
DiameterBounds delta_diameter_bounds(const DeltaTable& table, std::span<const PointId> subset,
                                     const StructureConstants& constants);

}  // namespace homtype
