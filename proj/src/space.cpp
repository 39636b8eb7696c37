#include "homtype/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "homtype/error.hpp"

namespace homtype {

const char* to_string(SpaceErrorCode code) noexcept {
  switch (code) {
    case SpaceErrorCode::schema: return "schema";
    case SpaceErrorCode::unknown_field: return "unknown_field";
    case SpaceErrorCode::duplicate_id: return "duplicate_id";
    case SpaceErrorCode::non_dense_ids: return "non_dense_ids";
    case SpaceErrorCode::nonpositive_weight: return "nonpositive_weight";
    case SpaceErrorCode::nonzero_diagonal: return "nonzero_diagonal";
    case SpaceErrorCode::nonpositive_distance: return "nonpositive_distance";
    case SpaceErrorCode::asymmetric: return "asymmetric";
    case SpaceErrorCode::size_mismatch: return "size_mismatch";
    case SpaceErrorCode::bad_magic: return "bad_magic";
    case SpaceErrorCode::bad_version: return "bad_version";
    case SpaceErrorCode::non_finite: return "non_finite";
    case SpaceErrorCode::io: return "io";
  }
  return "unknown";
}

const char* to_string(MetricKind kind) noexcept {
  switch (kind) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::sup: return "sup";
    case MetricKind::matrix: return "matrix";
  }
  return "unknown";
}

const char* to_string(BallFlavor flavor) noexcept {
  return flavor == BallFlavor::d ? "d" : "delta";
}

MetricMeasureSpace MetricMeasureSpace::from_coordinates(std::string name, std::size_t dim,
                                                        std::vector<double> coords,
                                                        std::vector<double> weights,
                                                        MetricKind kind) {
  if (kind == MetricKind::matrix)
    throw SpaceError(SpaceErrorCode::schema, "coordinate space needs an analytic metric kind");
  if (dim == 0) throw SpaceError(SpaceErrorCode::schema, "coordinate dimension must be positive");
  if (coords.size() != dim * weights.size())
    throw SpaceError(SpaceErrorCode::size_mismatch,
                     "expected " + std::to_string(dim * weights.size()) + " coordinates, got " +
                         std::to_string(coords.size()));
  MetricMeasureSpace s;
  s.name_ = std::move(name);
  s.kind_ = kind;
  s.dim_ = dim;
  s.coords_ = std::move(coords);
  s.weights_ = std::move(weights);
  s.validate();
  return s;
}

MetricMeasureSpace MetricMeasureSpace::from_matrix(std::string name, std::vector<double> distances,
                                                   std::vector<double> weights,
                                                   std::vector<double> coords, std::size_t dim) {
  const std::size_t n = weights.size();
  if (distances.size() != n * n)
    throw SpaceError(SpaceErrorCode::size_mismatch,
                     "distance table has " + std::to_string(distances.size()) +
                         " entries for n = " + std::to_string(n));
  if (!coords.empty() && coords.size() != dim * n)
    throw SpaceError(SpaceErrorCode::size_mismatch, "coordinate metadata does not match n");
  MetricMeasureSpace s;
  s.name_ = std::move(name);
  s.kind_ = MetricKind::matrix;
  s.dim_ = coords.empty() ? 0 : dim;
  s.coords_ = std::move(coords);
  s.matrix_ = std::move(distances);
  s.weights_ = std::move(weights);
  s.validate();
  return s;
}

void MetricMeasureSpace::validate() {
  const std::size_t n = size();
  if (n == 0) throw SpaceError(SpaceErrorCode::schema, "space has no points");
  if (n > std::numeric_limits<PointId>::max())
    throw SpaceError(SpaceErrorCode::schema, "too many points");
  total_mass_ = 0.0;
  min_weight_ = std::numeric_limits<double>::infinity();
  max_weight_ = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w)) throw SpaceError(SpaceErrorCode::non_finite, "weight of point " + std::to_string(i));
    if (!(w > 0.0))
      throw SpaceError(SpaceErrorCode::nonpositive_weight, "weight of point " + std::to_string(i));
    total_mass_ += w;
    min_weight_ = std::min(min_weight_, w);
    max_weight_ = std::max(max_weight_, w);
  }
  for (double c : coords_)
    if (!std::isfinite(c)) throw SpaceError(SpaceErrorCode::non_finite, "coordinate");

  if (kind_ == MetricKind::matrix) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dii = matrix_[i * n + i];
      if (dii != 0.0)
        throw SpaceError(SpaceErrorCode::nonzero_diagonal,
                         "d(" + std::to_string(i) + "," + std::to_string(i) + ") = " + std::to_string(dii));
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = matrix_[i * n + j];
        const double b = matrix_[j * n + i];
        if (!std::isfinite(a) || !std::isfinite(b))
          throw SpaceError(SpaceErrorCode::non_finite, "distance entry");
        if (a != b)
          throw SpaceError(SpaceErrorCode::asymmetric,
                           "d(" + std::to_string(i) + "," + std::to_string(j) + ") != d(" +
                               std::to_string(j) + "," + std::to_string(i) + ")");
        if (!(a > 0.0))
          throw SpaceError(SpaceErrorCode::nonpositive_distance,
                           "d(" + std::to_string(i) + "," + std::to_string(j) + ") = " + std::to_string(a));
      }
    }
    return;
  }
  // Analytic metrics are symmetric with a zero diagonal by construction; only
  // coincident points can break positivity.
  std::vector<PointId> order(n);
  std::iota(order.begin(), order.end(), PointId{0});
  const auto less = [&](PointId a, PointId b) {
    return std::lexicographical_compare(coords_.begin() + a * dim_, coords_.begin() + (a + 1) * dim_,
                                        coords_.begin() + b * dim_, coords_.begin() + (b + 1) * dim_);
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t k = 1; k < n; ++k) {
    if (distance(order[k - 1], order[k]) == 0.0)
      throw SpaceError(SpaceErrorCode::nonpositive_distance,
                       "points " + std::to_string(order[k - 1]) + " and " + std::to_string(order[k]) +
                           " coincide");
  }
}

void MetricMeasureSpace::check_id(PointId i) const {
  if (!valid_id(i))
    throw PreconditionError("unknown point id " + std::to_string(i) + " (n = " + std::to_string(size()) + ")");
}

std::vector<double> MetricMeasureSpace::distance_matrix() const {
  if (kind_ == MetricKind::matrix) return matrix_;
  const std::size_t n = size();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i * n + j] = m[j * n + i] = distance(PointId(i), PointId(j));
  return m;
}

std::vector<PointId> all_points(const MetricMeasureSpace& space) {
  std::vector<PointId> ids(space.size());
  std::iota(ids.begin(), ids.end(), PointId{0});
  return ids;
}

std::vector<PointId> normalize_subset(const MetricMeasureSpace& space, std::span<const PointId> ids) {
  std::vector<PointId> out(ids.begin(), ids.end());
  for (PointId i : out) space.check_id(i);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BallResult ball_query(const MetricMeasureSpace& space, const BallSpec& ball) {
  space.check_id(ball.center);
  if (ball.flavor == BallFlavor::delta)
    throw PreconditionError("delta-flavor ball requested without a delta table");
  if (!(ball.radius >= 0.0)) throw PreconditionError("ball radius must be nonnegative");
  BallResult out;
  const bool closed = ball.closure == Closure::closed;
  for (PointId y = 0; y < space.size(); ++y) {
    const double d = space.distance(ball.center, y);
    if (closed ? d <= ball.radius : d < ball.radius) {
      out.members.push_back(y);
      out.mass += space.weight(y);
    }
  }
  return out;
}

double open_ball_mass(const MetricMeasureSpace& space, PointId center, double radius) {
  double mass = 0.0;
  for (PointId y = 0; y < space.size(); ++y)
    if (space.distance(center, y) < radius) mass += space.weight(y);
  return mass;
}

double ball_mass_denominator(const MetricMeasureSpace& space, PointId center, double radius) {
  return std::max(open_ball_mass(space, center, radius), space.weight(center));
}

double diameter(const MetricMeasureSpace& space, std::span<const PointId> subset) {
  double diam = 0.0;
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = i + 1; j < subset.size(); ++j)
      diam = std::max(diam, space.distance(subset[i], subset[j]));
  return diam;
}

double min_positive_distance(const MetricMeasureSpace& space, std::span<const PointId> subset) {
  std::vector<PointId> ids;
  if (subset.empty()) {
    ids = all_points(space);
    subset = ids;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = i + 1; j < subset.size(); ++j) {
      const double d = space.distance(subset[i], subset[j]);
      if (d > 0.0) best = std::min(best, d);
    }
  return best;
}

std::vector<double> default_radius_grid(const MetricMeasureSpace& space) {
  const std::size_t n = space.size();
  std::vector<double> grid;
  grid.reserve(n * (n - 1) / 2);
  for (PointId i = 0; i < n; ++i)
    for (PointId j = i + 1; j < n; ++j) grid.push_back(space.distance(i, j));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const std::size_t m = grid.size();
  for (std::size_t k = 0; k < m; ++k) {
    grid.push_back(grid[k] / 2.0);
    grid.push_back(grid[k] * 2.0);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<double> thin_log_grid(std::span<const double> grid, std::size_t count) {
  if (count == 0 || grid.size() <= count) return {grid.begin(), grid.end()};
  std::vector<double> out;
  out.reserve(count);
  const double lo = std::log(grid.front());
  const double hi = std::log(grid.back());
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double target = lo + (hi - lo) * double(k) / double(count - 1);
    while (cursor + 1 < grid.size() && std::log(grid[cursor]) < target) ++cursor;
    if (out.empty() || grid[cursor] != out.back()) out.push_back(grid[cursor]);
  }
  if (out.back() != grid.back()) out.push_back(grid.back());
  return out;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1 || !(hi > lo)) return {lo};
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t k = 0; k < count; ++k) out[k] = std::exp(a + (b - a) * double(k) / double(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace homtype
