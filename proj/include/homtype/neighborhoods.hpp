#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "homtype/space.hpp"

namespace homtype {

/// Per-center neighbor lists sorted by distance, with prefix masses. Every d-ball
/// around an indexed center is a prefix of its row, so membership and mass
/// queries are a binary search. Memory is O(|centers| * n).
class Neighborhoods {
 public:
  struct Row {
    std::vector<PointId> order;       // ids by (distance, id)
    std::vector<double> distance;     // parallel to order
    std::vector<double> prefix_mass;  // prefix_mass[k] = mass of order[0..k)
  };

  explicit Neighborhoods(const MetricMeasureSpace& space);
  Neighborhoods(const MetricMeasureSpace& space, std::span<const PointId> centers);

  const MetricMeasureSpace& space() const noexcept { return *space_; }
  bool has(PointId center) const noexcept;
  const Row& row(PointId center) const;

  std::size_t open_count(PointId center, double radius) const;
  std::size_t closed_count(PointId center, double radius) const;
  double open_mass(PointId center, double radius) const;
  double closed_mass(PointId center, double radius) const;
  /// Members of the open ball in distance order.
  std::span<const PointId> open_members(PointId center, double radius) const;
  std::span<const PointId> closed_members(PointId center, double radius) const;

  /// Distinct positive distances from the center, ascending.
  std::vector<double> distinct_distances(PointId center) const;

 private:
  const MetricMeasureSpace* space_;
  std::vector<int> slot_;
  std::vector<Row> rows_;
};

}  // namespace homtype
