#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "homtype/space.hpp"

namespace support {

using homtype::MetricMeasureSpace;
using homtype::PointId;

inline MetricMeasureSpace line(std::size_t n, double weight = 1.0) {
  std::vector<double> coords(n), weights(n, weight);
  for (std::size_t i = 0; i < n; ++i) coords[i] = double(i);
  return MetricMeasureSpace::from_coordinates("line", 1, coords, weights);
}

inline MetricMeasureSpace equidistant(std::size_t n) {
  std::vector<double> m(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 0.0;
  return MetricMeasureSpace::from_matrix("equidistant", m, std::vector<double>(n, 1.0 / double(n)));
}

/// Random points in the unit square with random positive weights.
inline MetricMeasureSpace random_plane(std::size_t n, std::uint64_t seed, bool unit_weights = false) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> coords(2 * n), weights(n);
  for (auto& c : coords) c = u(gen);
  for (auto& w : weights) w = unit_weights ? 1.0 / double(n) : 0.05 + u(gen);
  return MetricMeasureSpace::from_coordinates("random", 2, coords, weights);
}

/// Brute-force delta: minimum mass over every candidate ball around every center.
/// closed: radii from the distance multiset; open: radii from `grid`. Ball masses
/// are summed nearest-first, ties by id, so equal balls give bit-equal masses.
inline double delta_oracle(const MetricMeasureSpace& s, PointId x, PointId y, bool closed,
                           const std::vector<double>& grid = {}) {
  if (x == y) return 0.0;
  const std::size_t n = s.size();
  double best = std::numeric_limits<double>::infinity();
  for (PointId z = 0; z < n; ++z) {
    std::vector<double> radii;
    if (closed) {
      for (PointId w = 0; w < n; ++w) radii.push_back(s.distance(z, w));
    } else {
      radii = grid;
    }
    std::vector<std::pair<double, PointId>> near;
    for (PointId w = 0; w < n; ++w) near.push_back({s.distance(z, w), w});
    std::sort(near.begin(), near.end());
    for (double r : radii) {
      double mass = 0.0;
      bool hx = false, hy = false;
      for (const auto& [d, w] : near) {
        if (closed ? d <= r : d < r) {
          mass += s.weight(w);
          hx = hx || w == x;
          hy = hy || w == y;
        }
      }
      if (hx && hy) best = std::min(best, mass);
    }
  }
  return best;
}

}  // namespace support
