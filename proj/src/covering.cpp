#include "homtype/covering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "detail/kernels.hpp"
#include "homtype/error.hpp"
#include "homtype/random.hpp"

namespace homtype {

namespace {

std::vector<PointId> scan_order(std::span<const PointId> host, std::optional<std::uint64_t> seed) {
  std::vector<PointId> order(host.begin(), host.end());
  if (seed) {
    Rng rng(*seed);
    rng.shuffle(std::span<PointId>(order));
  }
  return order;
}

template <class Dist>
DisperseSet disperse(std::span<const PointId> host, double t, BallFlavor flavor, std::optional<std::uint64_t> seed,
                     Dist&& dist) {
  if (!(t > 0.0)) throw PreconditionError("dispersion threshold must be positive");
  DisperseSet out;
  out.t = t;
  out.flavor = flavor;
  const auto order = scan_order(host, seed);
  out.members = detail::greedy_disperse(order, dist, t);
  return out;
}

/// Target points as indices 0..k-1; `index[p]` is -1 off the target.
struct TargetIndex {
  std::vector<PointId> ids;
  std::vector<int> index;

  TargetIndex(const MetricMeasureSpace& space, std::span<const PointId> target)
      : ids(normalize_subset(space, target)), index(space.size(), -1) {
    for (std::size_t k = 0; k < ids.size(); ++k) index[ids[k]] = int(k);
  }

  std::vector<int> hits(const CoverCandidate& c) const {
    std::vector<int> out;
    for (PointId p : c.members)
      if (p < index.size() && index[p] >= 0) out.push_back(index[p]);
    return out;
  }
};

CoverSolution assemble(const MetricMeasureSpace& space, const TargetIndex& target,
                       std::span<const CoverCandidate> candidates, const std::vector<std::size_t>& chosen,
                       CoverMethod method) {
  CoverSolution out;
  out.method = method;
  out.covered = target.ids;
  std::vector<char> hit(target.ids.size(), 0);
  std::vector<std::vector<PointId>> memberships;
  for (std::size_t c : chosen) {
    out.balls.push_back(candidates[c].ball);
    out.ball_costs.push_back(candidates[c].cost);
    out.cost += candidates[c].cost;
    memberships.push_back(candidates[c].members);
    for (int e : target.hits(candidates[c])) hit[std::size_t(e)] = 1;
  }
  for (std::size_t e = 0; e < hit.size(); ++e)
    if (!hit[e]) out.uncovered.push_back(target.ids[e]);
  out.feasible = out.uncovered.empty();
  out.max_overlap = overlap_count(space.size(), memberships).max;
  return out;
}

std::vector<std::size_t> greedy_indices(const TargetIndex& index, std::span<const CoverCandidate> candidates) {
  const std::size_t k = index.ids.size();
  std::vector<std::vector<int>> hits(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) hits[c] = index.hits(candidates[c]);

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (std::size_t c = 0; c < candidates.size(); ++c)
    if (!hits[c].empty()) queue.push({candidates[c].cost / double(hits[c].size()), c});

  std::vector<char> covered(k, 0);
  std::size_t remaining = k;
  std::vector<std::size_t> chosen;
  while (remaining > 0 && !queue.empty()) {
    const auto [stale, c] = queue.top();
    queue.pop();
    std::size_t fresh = 0;
    for (int e : hits[c]) fresh += covered[std::size_t(e)] ? 0 : 1;
    if (fresh == 0) continue;
    const Entry now{candidates[c].cost / double(fresh), c};
    if (!queue.empty() && queue.top() < now) {
      queue.push(now);
      continue;
    }
    chosen.push_back(c);
    for (int e : hits[c])
      if (!covered[std::size_t(e)]) {
        covered[std::size_t(e)] = 1;
        --remaining;
      }
  }
  return chosen;
}

}  // namespace

DisperseSet maximal_disperse_set(const MetricMeasureSpace& space, std::span<const PointId> host, double t,
                                 std::optional<std::uint64_t> order_seed) {
  const auto ids = normalize_subset(space, host);
  return disperse(ids, t, BallFlavor::d, order_seed, [&](PointId a, PointId b) { return space.distance(a, b); });
}

DisperseSet maximal_disperse_set(const DeltaTable& table, std::span<const PointId> host, double t,
                                 std::optional<std::uint64_t> order_seed) {
  const auto ids = normalize_subset(table.space(), host);
  return disperse(ids, t, BallFlavor::delta, order_seed, [&](PointId a, PointId b) { return table(a, b); });
}

CoverCandidate make_candidate(const MetricMeasureSpace& space, const BallSpec& ball, double cost) {
  auto r = ball_query(space, ball);
  return {ball, std::move(r.members), r.mass, cost};
}

CoverCandidate make_candidate(const DeltaTable& table, const BallSpec& ball, double cost) {
  auto r = ball_query(table, ball);
  return {ball, std::move(r.members), r.mass, cost};
}

const char* to_string(CoverMethod method) noexcept {
  switch (method) {
    case CoverMethod::greedy: return "greedy";
    case CoverMethod::exact: return "exact";
    case CoverMethod::lemma31: return "lemma31";
  }
  return "unknown";
}

OverlapStats overlap_count(std::size_t n, std::span<const std::vector<PointId>> memberships) {
  std::vector<std::size_t> count(n, 0);
  for (const auto& m : memberships)
    for (PointId p : m) ++count[p];
  OverlapStats out;
  for (std::size_t c : count) out.max = std::max(out.max, c);
  out.histogram.assign(out.max + 1, 0);
  for (std::size_t c : count) ++out.histogram[c];
  return out;
}

OverlapStats overlap_count(const MetricMeasureSpace& space, std::span<const BallSpec> balls) {
  std::vector<std::vector<PointId>> m;
  for (const auto& b : balls) m.push_back(ball_query(space, b).members);
  return overlap_count(space.size(), m);
}

OverlapStats overlap_count(const DeltaTable& table, std::span<const BallSpec> balls) {
  std::vector<std::vector<PointId>> m;
  for (const auto& b : balls) m.push_back(ball_query(table, b).members);
  return overlap_count(table.size(), m);
}

CoverSolution greedy_weighted_cover(const MetricMeasureSpace& space, std::span<const PointId> target,
                                    std::span<const CoverCandidate> candidates) {
  const TargetIndex index(space, target);
  return assemble(space, index, candidates, greedy_indices(index, candidates), CoverMethod::greedy);
}

CoverSolution exact_cover_oracle(const MetricMeasureSpace& space, std::span<const PointId> target,
                                 std::span<const CoverCandidate> candidates, const ExactCoverLimits& limits) {
  const TargetIndex index(space, target);
  const std::size_t k = index.ids.size();
  if (k > limits.max_targets || k > 31)
    throw LimitExceeded("exact cover limited to " + std::to_string(limits.max_targets) + " target points, got " +
                        std::to_string(k));
  if (k == 0) return assemble(space, index, candidates, {}, CoverMethod::exact);

  // Dominance pruning: drop a ball whose target hits are a subset of a ball that is no more expensive.
  std::vector<std::uint32_t> mask(candidates.size(), 0);
  for (std::size_t c = 0; c < candidates.size(); ++c)
    for (int e : index.hits(candidates[c])) mask[c] |= std::uint32_t{1} << e;
  std::vector<std::size_t> kept;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (mask[c] == 0) continue;
    bool dominated = false;
    for (std::size_t o = 0; o < candidates.size() && !dominated; ++o) {
      if (o == c || (mask[o] & mask[c]) != mask[c]) continue;
      const bool cheaper = candidates[o].cost < candidates[c].cost;
      const bool tie = candidates[o].cost == candidates[c].cost && (mask[o] != mask[c] || o < c);
      dominated = cheaper || tie;
    }
    if (!dominated) kept.push_back(c);
  }
  if (kept.size() > limits.max_candidates)
    throw LimitExceeded("exact cover limited to " + std::to_string(limits.max_candidates) +
                        " candidates after pruning, got " + std::to_string(kept.size()));

  const std::uint32_t full = k == 32 ? ~0u : (std::uint32_t{1} << k) - 1;
  std::uint32_t reach = 0;
  for (std::size_t c : kept) reach |= mask[c];
  if (reach != full) throw PreconditionError("candidate pool does not cover the target");

  std::vector<std::vector<std::size_t>> holders(k);
  std::vector<double> cheapest(k, std::numeric_limits<double>::infinity());
  for (std::size_t c : kept)
    for (std::size_t e = 0; e < k; ++e)
      if (mask[c] >> e & 1u) {
        holders[e].push_back(c);
        cheapest[e] = std::min(cheapest[e], candidates[c].cost);
      }
  for (auto& h : holders)
    std::sort(h.begin(), h.end(), [&](std::size_t a, std::size_t b) {
      return candidates[a].cost != candidates[b].cost ? candidates[a].cost < candidates[b].cost : a < b;
    });

  std::vector<CoverCandidate> pool;
  for (std::size_t c : kept) pool.push_back(candidates[c]);
  std::vector<std::size_t> best_pick;
  double best = 0.0;
  for (std::size_t i : greedy_indices(index, pool)) {
    best_pick.push_back(kept[i]);
    best += candidates[kept[i]].cost;
  }

  std::vector<std::size_t> pick;
  std::function<void(std::uint32_t, double)> search = [&](std::uint32_t covered, double cost) {
    if (covered == full) {
      if (cost < best) {
        best = cost;
        best_pick = pick;
      }
      return;
    }
    std::size_t branch = k;
    double bound = 0.0;
    for (std::size_t e = 0; e < k; ++e) {
      if (covered >> e & 1u) continue;
      bound = std::max(bound, cheapest[e]);
      if (branch == k || holders[e].size() < holders[branch].size()) branch = e;
    }
    if (!(cost + bound < best)) return;
    for (std::size_t c : holders[branch]) {
      if (!(cost + candidates[c].cost < best)) break;
      pick.push_back(c);
      search(covered | mask[c], cost + candidates[c].cost);
      pick.pop_back();
    }
  };
  search(0, 0.0);
  return assemble(space, index, candidates, best_pick, CoverMethod::exact);
}

double cover_lower_bound(std::span<const PointId> target, std::span<const CoverCandidate> candidates) {
  std::vector<PointId> ids(target.begin(), target.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> single(ids.size(), inf), share(ids.size(), inf);
  for (const auto& c : candidates) {
    std::vector<std::size_t> hit;
    for (PointId p : c.members) {
      const auto it = std::lower_bound(ids.begin(), ids.end(), p);
      if (it != ids.end() && *it == p) hit.push_back(std::size_t(it - ids.begin()));
    }
    for (std::size_t e : hit) {
      single[e] = std::min(single[e], c.cost);
      share[e] = std::min(share[e], c.cost / double(hit.size()));
    }
  }
  double worst = 0.0, total = 0.0;
  for (std::size_t e = 0; e < ids.size(); ++e) {
    worst = std::max(worst, single[e]);
    total += share[e];
  }
  return std::max(worst, total);
}

CoverCertificate certify_cover(const MetricMeasureSpace& space, std::span<const PointId> target,
                               std::span<const BallSpec> balls) {
  CoverCertificate out;
  std::vector<std::size_t> count(space.size(), 0);
  for (const auto& b : balls) {
    if (b.flavor != BallFlavor::d) throw PreconditionError("certify_cover checks d-balls");
    space.check_id(b.center);
    double mass = 0.0;
    for (PointId y = 0; y < space.size(); ++y) {
      const double d = space.distance(b.center, y);
      if (b.closure == Closure::open ? d < b.radius : d <= b.radius) {
        ++count[y];
        mass += space.weight(y);
      }
    }
    out.max_mass = std::max(out.max_mass, mass);
  }
  for (PointId p : target)
    if (count[p] == 0) out.uncovered.push_back(p);
  out.covers = out.uncovered.empty();
  for (std::size_t c : count) out.max_overlap = std::max(out.max_overlap, c);
  return out;
}

SmallMeasureCover small_measure_cover(const DeltaTable& table, const StructureConstants& constants,
                                      std::span<const PointId> target, double rho,
                                      const SmallMeasureCoverOptions& options) {
  const MetricMeasureSpace& space = table.space();
  const auto G = normalize_subset(space, target);
  if (G.empty()) throw PreconditionError("covering target must be nonempty");
  if (!(rho > 0.0)) throw PreconditionError("rho must be positive");
  if (options.K_tilde < 1.0 || options.N_tilde < 1) throw PreconditionError("delta structure constants below floors");

  SmallMeasureCertificate cert;
  cert.rho = rho;
  const double A = constants.A;
  const int ell = constants.ell_diameter;
  cert.t = rho / (4.0 * options.K_tilde * std::pow(A, ell + 1));
  cert.p = smallest_power_of_two_exponent(constants.K) + 1;
  cert.m = smallest_power_of_two_exponent(8.0 * options.K_tilde * std::pow(A, ell + cert.p + 1));
  cert.overlap_bound = std::pow(double(options.N_tilde), cert.m);

  const DisperseSet U = maximal_disperse_set(table, G, cert.t, options.order_seed);
  std::vector<BallSpec> balls;
  std::vector<std::vector<PointId>> memberships;
  for (PointId x : U.members) {
    const auto E = delta_ball(table, x, cert.t).members;
    double r = 2.0 * diameter(space, E);
    char floored = 0;
    if (r == 0.0) {
      const std::vector<PointId> everyone = all_points(space);
      double nearest = std::numeric_limits<double>::infinity();
      for (PointId y : everyone)
        if (y != x) nearest = std::min(nearest, space.distance(x, y));
      r = 0.5 * nearest;
      floored = 1;
    }
    const BallSpec ball{x, r, BallFlavor::d, Closure::open};
    auto q = ball_query(space, ball);
    balls.push_back(ball);
    cert.radii.push_back(r);
    cert.masses.push_back(q.mass);
    cert.resolution_floor.push_back(floored);
    cert.floors += std::size_t(floored);
    memberships.push_back(std::move(q.members));
  }

  const CoverCertificate recount = certify_cover(space, G, balls);
  cert.covers = recount.covers;
  cert.masses_below_rho = std::all_of(cert.masses.begin(), cert.masses.end(), [&](double m) { return m < rho; });
  cert.centers_in_target = std::all_of(balls.begin(), balls.end(), [&](const BallSpec& b) {
    return std::binary_search(G.begin(), G.end(), b.center);
  });
  const OverlapStats overlap = overlap_count(space.size(), memberships);
  cert.overlap_within_bound = double(overlap.max) <= cert.overlap_bound;
  cert.target_diameter = diameter(space, G);
  double mass_G = 0.0;
  for (PointId p : G) mass_G += space.weight(p);
  cert.radius_remark_applies = rho <= mass_G;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    if (cert.resolution_floor[i]) continue;
    cert.max_radius = std::max(cert.max_radius, cert.radii[i]);
  }
  cert.radius_remark_holds = !cert.radius_remark_applies || cert.max_radius <= cert.target_diameter;

  SmallMeasureCover out;
  out.cover.method = CoverMethod::lemma31;
  out.cover.balls = balls;
  out.cover.ball_costs = cert.masses;
  out.cover.cost = std::accumulate(cert.masses.begin(), cert.masses.end(), 0.0);
  out.cover.covered = G;
  out.cover.uncovered = recount.uncovered;
  out.cover.feasible = recount.covers;
  out.cover.max_overlap = overlap.max;
  out.certificate = std::move(cert);
  return out;
}

}  // namespace homtype
