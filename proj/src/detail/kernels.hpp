#pragma once

// Distance-agnostic kernels shared by the d and delta flavors.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "homtype/random.hpp"
#include "homtype/space.hpp"
#include "homtype/structure.hpp"

namespace homtype::detail {

/// Ratios this close to 1 are rounding noise on genuine metrics.
inline constexpr double kTriangleSnap = 1e-12;

inline double snap_triangle(double k) { return k <= 1.0 + kTriangleSnap ? 1.0 : k; }

/// Exhaustive triangle audit over a dense symmetric table.
inline TriangleEstimate triangle_exact_dense(std::span<const double> m, std::size_t n) {
  TriangleEstimate out;
  out.audited = n >= 2 ? n * (n - 1) / 2 * n : 0;
  double best = 1.0;
  for (std::size_t x = 0; x < n; ++x) {
    const double* rx = m.data() + x * n;
    for (std::size_t y = x + 1; y < n; ++y) {
      const double* ry = m.data() + y * n;
      double lo = std::numeric_limits<double>::infinity();
      for (std::size_t z = 0; z < n; ++z) lo = std::min(lo, rx[z] + ry[z]);
      const double ratio = rx[y] / lo;
      if (ratio > best) {
        best = ratio;
        std::size_t arg = 0;
        for (std::size_t z = 0; z < n; ++z)
          if (rx[z] + ry[z] == lo) {
            arg = z;
            break;
          }
        out.witness = {PointId(x), PointId(y), PointId(arg)};
      }
    }
  }
  out.K = snap_triangle(best);
  return out;
}

template <class Dist>
TriangleEstimate triangle_sampled(std::size_t n, Dist&& dist, std::size_t count, std::uint64_t seed) {
  TriangleEstimate out;
  out.lower_bound = true;
  if (n < 2) return out;
  Rng rng(seed);
  double best = 1.0;
  for (std::size_t k = 0; k < count; ++k) {
    const auto x = PointId(rng.index(n));
    auto y = PointId(rng.index(n - 1));
    if (y >= x) ++y;
    const auto z = PointId(rng.index(n));
    const double denom = dist(x, z) + dist(z, y);
    const double ratio = dist(x, y) / denom;
    if (ratio > best) {
      best = ratio;
      out.witness = {x, y, z};
    }
  }
  out.audited = count;
  out.K = snap_triangle(best);
  return out;
}

/// Maximum independent set size of a graph on <= 64 vertices given as adjacency masks.
inline int max_independent_set(std::span<const std::uint64_t> adj, std::uint64_t candidates) {
  if (candidates == 0) return 0;
  int pick = -1;
  int pick_degree = -1;
  for (std::uint64_t rest = candidates; rest; rest &= rest - 1) {
    const int v = std::countr_zero(rest);
    const int degree = std::popcount(adj[v] & candidates);
    if (degree > pick_degree) {
      pick_degree = degree;
      pick = v;
    }
  }
  if (pick_degree == 0) return std::popcount(candidates);
  const std::uint64_t without = candidates & ~(std::uint64_t{1} << pick);
  const int skip = max_independent_set(adj, without);
  const int take = 1 + max_independent_set(adj, without & ~adj[pick]);
  return std::max(skip, take);
}

/// Greedy scan: admit a point iff it is at distance >= t from every admitted point.
template <class Dist>
std::vector<PointId> greedy_disperse(std::span<const PointId> order, Dist&& dist, double t) {
  std::vector<PointId> kept;
  for (PointId p : order) {
    bool ok = true;
    for (PointId q : kept)
      if (dist(p, q) < t) {
        ok = false;
        break;
      }
    if (ok) kept.push_back(p);
  }
  return kept;
}

/// Largest t-disperse subset: exact below the limit, greedy otherwise.
template <class Dist>
std::size_t max_disperse(std::span<const PointId> ids, Dist&& dist, double t, std::size_t exact_limit,
                         bool* exact) {
  const std::size_t k = ids.size();
  if (k <= 1) {
    if (exact) *exact = true;
    return k;
  }
  if (k <= std::min<std::size_t>(exact_limit, 64)) {
    std::vector<std::uint64_t> adj(k, 0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (dist(ids[i], ids[j]) < t) {
          adj[i] |= std::uint64_t{1} << j;
          adj[j] |= std::uint64_t{1} << i;
        }
    const std::uint64_t all = k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
    if (exact) *exact = true;
    return static_cast<std::size_t>(max_independent_set(adj, all));
  }
  if (exact) *exact = false;
  return greedy_disperse(ids, dist, t).size();
}

/// Radius grid for disperse audits: breakpoints and the midpoints between them.
inline std::vector<double> with_midpoints(std::span<const double> grid) {
  std::vector<double> out;
  out.reserve(grid.size() * 2);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.push_back(grid[k]);
    if (k + 1 < grid.size()) out.push_back(0.5 * (grid[k] + grid[k + 1]));
  }
  return out;
}

/// Seeded subset of ids (all of them when count is 0 or large enough), ascending.
inline std::vector<PointId> sample_ids(std::span<const PointId> ids, std::size_t count, std::uint64_t seed) {
  std::vector<PointId> out(ids.begin(), ids.end());
  if (count == 0 || count >= out.size()) return out;
  Rng rng(seed);
  rng.shuffle(std::span<PointId>(out));
  out.resize(count);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace homtype::detail
