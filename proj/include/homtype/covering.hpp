#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "homtype/normalization.hpp"
#include "homtype/space.hpp"
#include "homtype/structure.hpp"

namespace homtype {

struct DisperseSet {
  std::vector<PointId> members;  // admission order
  double t = 0.0;
  BallFlavor flavor = BallFlavor::d;
  bool maximal = true;
};

/// Greedy scan of `host` (ascending ids, or a seeded permutation): admit a point
/// iff it is at distance >= t from every admitted point.
DisperseSet maximal_disperse_set(const MetricMeasureSpace& space, std::span<const PointId> host, double t,
                                 std::optional<std::uint64_t> order_seed = std::nullopt);
/// Same with respect to delta; the table needs rows for the host.
DisperseSet maximal_disperse_set(const DeltaTable& table, std::span<const PointId> host, double t,
                                 std::optional<std::uint64_t> order_seed = std::nullopt);

/// A ball offered to the cover engines together with its membership and cost.
struct CoverCandidate {
  BallSpec ball;
  std::vector<PointId> members;  // all of X, ascending
  double mass = 0.0;
  double cost = 0.0;
};

CoverCandidate make_candidate(const MetricMeasureSpace& space, const BallSpec& ball, double cost);
CoverCandidate make_candidate(const DeltaTable& table, const BallSpec& ball, double cost);

enum class CoverMethod { greedy, exact, lemma31 };
const char* to_string(CoverMethod method) noexcept;

struct CoverSolution {
  std::vector<BallSpec> balls;
  std::vector<double> ball_costs;
  double cost = 0.0;
  std::vector<PointId> covered;    // the target set
  std::vector<PointId> uncovered;  // residue when infeasible
  std::size_t max_overlap = 0;     // over all of X
  bool feasible = false;
  CoverMethod method = CoverMethod::greedy;
};

struct OverlapStats {
  std::size_t max = 0;
  std::vector<std::size_t> histogram;  // histogram[k] = number of points in exactly k balls
};

OverlapStats overlap_count(const MetricMeasureSpace& space, std::span<const BallSpec> balls);
OverlapStats overlap_count(const DeltaTable& table, std::span<const BallSpec> balls);
OverlapStats overlap_count(std::size_t n, std::span<const std::vector<PointId>> memberships);

/// Cost per newly covered target point, lazily re-evaluated. Infeasible pools
/// return feasible = false with the uncovered residue.
CoverSolution greedy_weighted_cover(const MetricMeasureSpace& space, std::span<const PointId> target,
                                    std::span<const CoverCandidate> candidates);

struct ExactCoverLimits {
  std::size_t max_targets = 14;
  std::size_t max_candidates = 40;  // after dominance pruning
};

/// Branch and bound over candidate subsets. Throws LimitExceeded beyond the limits
/// and PreconditionError when the pool cannot cover the target.
CoverSolution exact_cover_oracle(const MetricMeasureSpace& space, std::span<const PointId> target,
                                 std::span<const CoverCandidate> candidates, const ExactCoverLimits& limits = {});

/// max(max_e min cost of a ball holding e, sum_e min over balls holding e of cost / |ball within target|).
double cover_lower_bound(std::span<const PointId> target, std::span<const CoverCandidate> candidates);

/// Recount from raw memberships.
struct CoverCertificate {
  bool covers = false;
  std::vector<PointId> uncovered;
  double max_mass = 0.0;
  std::size_t max_overlap = 0;
};
CoverCertificate certify_cover(const MetricMeasureSpace& space, std::span<const PointId> target,
                               std::span<const BallSpec> balls);

struct SmallMeasureCoverOptions {
  double K_tilde = 1.0;    // triangle constant of delta
  std::size_t N_tilde = 1;  // metric dimension of delta
  std::optional<std::uint64_t> order_seed;
};

struct SmallMeasureCertificate {
  double rho = 0.0;
  double t = 0.0;
  int p = 0;
  int m = 0;
  double overlap_bound = 0.0;  // N_tilde^m
  std::vector<double> radii;
  std::vector<double> masses;
  std::vector<char> resolution_floor;
  std::size_t floors = 0;
  bool covers = false;
  bool masses_below_rho = false;
  bool centers_in_target = false;
  bool overlap_within_bound = false;
  /// rho <= mass(G) implies r_i <= diam(G); floored balls are excluded.
  bool radius_remark_applies = false;
  bool radius_remark_holds = true;
  double max_radius = 0.0;
  double target_diameter = 0.0;

  bool passed() const {
    return covers && masses_below_rho && centers_in_target && overlap_within_bound && radius_remark_holds;
  }
};

struct SmallMeasureCover {
  CoverSolution cover;
  SmallMeasureCertificate certificate;
};

/// Bounded-overlap cover of G by d-balls of mass below rho: t = rho / (4 K~ A^(ell+1)),
/// centers a maximal t-disperse set of G in delta, radii 2 diam(B_delta(x_i, t)).
/// ell is the delta-diameter exponent of `constants`. The table needs rows for G.
SmallMeasureCover small_measure_cover(const DeltaTable& table, const StructureConstants& constants,
                                      std::span<const PointId> target, double rho,
                                      const SmallMeasureCoverOptions& options);

}  // namespace homtype
