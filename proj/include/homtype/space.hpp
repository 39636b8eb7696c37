#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace homtype {

using PointId = std::uint32_t;

enum class MetricKind { euclidean, sup, matrix };
enum class BallFlavor { d, delta };
enum class Closure { open, closed };

const char* to_string(MetricKind kind) noexcept;
const char* to_string(BallFlavor flavor) noexcept;

/// A ball request. For flavor d the radius is in metric units; for flavor
/// delta it is in mass units.
struct BallSpec {
  PointId center = 0;
  double radius = 0.0;
  BallFlavor flavor = BallFlavor::d;
  Closure closure = Closure::open;
};

struct BallResult {
  std::vector<PointId> members;  // ascending ids
  double mass = 0.0;
};

/// Finite quasi-metric space with a positive weight per point (a discretized
/// doubling measure). Immutable after construction; every factory validates
/// the invariants and throws SpaceError on failure.
class MetricMeasureSpace {
 public:
  MetricMeasureSpace() = default;

  /// Analytic metric over flat row-major coordinates (`dim` values per point).
  static MetricMeasureSpace from_coordinates(std::string name, std::size_t dim,
                                             std::vector<double> coords,
                                             std::vector<double> weights,
                                             MetricKind kind = MetricKind::euclidean);

  /// Explicit n*n row-major distance table. Coordinates are optional metadata.
  static MetricMeasureSpace from_matrix(std::string name, std::vector<double> distances,
                                        std::vector<double> weights,
                                        std::vector<double> coords = {}, std::size_t dim = 0);

  std::size_t size() const noexcept { return weights_.size(); }
  const std::string& name() const noexcept { return name_; }
  MetricKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  bool has_coordinates() const noexcept { return dim_ > 0; }

  std::span<const double> coords(PointId i) const { return {coords_.data() + i * dim_, dim_}; }
  std::span<const double> coordinates() const noexcept { return coords_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> matrix() const noexcept { return matrix_; }
  double weight(PointId i) const { return weights_[i]; }
  double total_mass() const noexcept { return total_mass_; }
  double min_weight() const noexcept { return min_weight_; }
  double max_weight() const noexcept { return max_weight_; }

  bool valid_id(PointId i) const noexcept { return i < size(); }
  /// Throws PreconditionError for ids outside 0..n-1.
  void check_id(PointId i) const;

  double distance(PointId i, PointId j) const noexcept;

  /// Materialized n*n distance table (copies for the matrix kind).
  std::vector<double> distance_matrix() const;

 private:
  void validate();

  std::string name_;
  MetricKind kind_ = MetricKind::euclidean;
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<double> matrix_;
  std::vector<double> weights_;
  double total_mass_ = 0.0;
  double min_weight_ = 0.0;
  double max_weight_ = 0.0;
};

inline double MetricMeasureSpace::distance(PointId i, PointId j) const noexcept {
  if (kind_ == MetricKind::matrix) return matrix_[static_cast<std::size_t>(i) * size() + j];
  const double* a = coords_.data() + static_cast<std::size_t>(i) * dim_;
  const double* b = coords_.data() + static_cast<std::size_t>(j) * dim_;
  if (kind_ == MetricKind::sup) {
    double m = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) m = std::fmax(m, std::fabs(a[k] - b[k]));
    return m;
  }
  if (dim_ == 1) return std::fabs(a[0] - b[0]);
  double s = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return std::sqrt(s);
}

std::vector<PointId> all_points(const MetricMeasureSpace& space);

/// Sorted, deduplicated, validated id list. Throws PreconditionError on bad ids.
std::vector<PointId> normalize_subset(const MetricMeasureSpace& space, std::span<const PointId> ids);

/// d-ball membership and mass. Flavor delta needs a DeltaTable; use the
/// overload in normalization.hpp.
BallResult ball_query(const MetricMeasureSpace& space, const BallSpec& ball);

/// Mass of the open ball B(x, r).
double open_ball_mass(const MetricMeasureSpace& space, PointId center, double radius);

/// max(open-ball mass, weight of the center): keeps mass denominators positive
/// at radii below the point spacing.
double ball_mass_denominator(const MetricMeasureSpace& space, PointId center, double radius);

double diameter(const MetricMeasureSpace& space, std::span<const PointId> subset);

/// Smallest positive distance between two points of `subset` (all of X when empty).
double min_positive_distance(const MetricMeasureSpace& space, std::span<const PointId> subset = {});

/// Sorted distinct positive pairwise distances together with their halves and doubles.
std::vector<double> default_radius_grid(const MetricMeasureSpace& space);

/// Keeps at most `count` entries of an ascending grid, evenly spaced in log scale
/// (first and last entries always kept). Returns the input when it is small enough.
std::vector<double> thin_log_grid(std::span<const double> grid, std::size_t count);

/// `count` log-spaced values covering [lo, hi].
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

}  // namespace homtype
