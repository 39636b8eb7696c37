#include "homtype/neighborhoods.hpp"

#include <algorithm>
#include <numeric>

#include "homtype/error.hpp"
#include "homtype/parallel.hpp"

namespace homtype {

namespace {

Neighborhoods::Row build_row(const MetricMeasureSpace& space, PointId center) {
  const std::size_t n = space.size();
  std::vector<std::pair<double, PointId>> keyed(n);
  for (PointId y = 0; y < n; ++y) keyed[y] = {space.distance(center, y), y};
  std::sort(keyed.begin(), keyed.end());
  Neighborhoods::Row row;
  row.order.resize(n);
  row.distance.resize(n);
  row.prefix_mass.resize(n + 1);
  row.prefix_mass[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    row.distance[k] = keyed[k].first;
    row.order[k] = keyed[k].second;
    row.prefix_mass[k + 1] = row.prefix_mass[k] + space.weight(keyed[k].second);
  }
  return row;
}

}  // namespace

Neighborhoods::Neighborhoods(const MetricMeasureSpace& space)
    : Neighborhoods(space, all_points(space)) {}

Neighborhoods::Neighborhoods(const MetricMeasureSpace& space, std::span<const PointId> centers)
    : space_(&space), slot_(space.size(), -1) {
  std::vector<PointId> unique;
  for (PointId c : centers) {
    space.check_id(c);
    if (slot_[c] < 0) {
      slot_[c] = static_cast<int>(unique.size());
      unique.push_back(c);
    }
  }
  rows_.resize(unique.size());
  parallel_for(unique.size(), [&](std::size_t k) { rows_[k] = build_row(space, unique[k]); });
}

bool Neighborhoods::has(PointId center) const noexcept {
  return center < slot_.size() && slot_[center] >= 0;
}

const Neighborhoods::Row& Neighborhoods::row(PointId center) const {
  if (!has(center)) throw PreconditionError("center " + std::to_string(center) + " is not indexed");
  return rows_[static_cast<std::size_t>(slot_[center])];
}

std::size_t Neighborhoods::open_count(PointId center, double radius) const {
  const Row& r = row(center);
  return static_cast<std::size_t>(std::lower_bound(r.distance.begin(), r.distance.end(), radius) -
                                  r.distance.begin());
}

std::size_t Neighborhoods::closed_count(PointId center, double radius) const {
  const Row& r = row(center);
  return static_cast<std::size_t>(std::upper_bound(r.distance.begin(), r.distance.end(), radius) -
                                  r.distance.begin());
}

double Neighborhoods::open_mass(PointId center, double radius) const {
  return row(center).prefix_mass[open_count(center, radius)];
}

double Neighborhoods::closed_mass(PointId center, double radius) const {
  return row(center).prefix_mass[closed_count(center, radius)];
}

std::span<const PointId> Neighborhoods::open_members(PointId center, double radius) const {
  return {row(center).order.data(), open_count(center, radius)};
}

std::span<const PointId> Neighborhoods::closed_members(PointId center, double radius) const {
  return {row(center).order.data(), closed_count(center, radius)};
}

std::vector<double> Neighborhoods::distinct_distances(PointId center) const {
  const Row& r = row(center);
  std::vector<double> out;
  for (double d : r.distance)
    if (d > 0.0 && (out.empty() || d != out.back())) out.push_back(d);
  return out;
}

}  // namespace homtype
