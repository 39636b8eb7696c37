#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homtype/covering.hpp"
#include "homtype/normalization.hpp"
#include "homtype/space.hpp"

namespace homtype {

/// metric: d-balls with radius below rho, cost r^s.
/// mu_relative: d-balls with mass at most rho, cost mass^s.
/// delta: delta-balls with radius below rho, cost r^s (radius in mass units).
enum class HausdorffFlavor { metric, mu_relative, delta };

const char* to_string(HausdorffFlavor flavor) noexcept;
HausdorffFlavor parse_hausdorff_flavor(const std::string& text);

struct CandidateOptions {
  /// Centers drawn from F instead of all of X.
  bool centers_in_target = false;
};

/// Every realizable ball meeting F, one per distinct trace on F (the cheapest
/// one). `scales` holds the realized radius (metric, delta) or mass (mu) of each
/// ball; zero radii are floored at half the smallest positive distance (d or
/// delta) from the center. Candidate memberships are traced on F.
struct CandidatePool {
  HausdorffFlavor flavor = HausdorffFlavor::metric;
  const DeltaTable* table = nullptr;
  std::vector<PointId> target;
  std::vector<CoverCandidate> balls;
  std::vector<double> scales;
  std::vector<char> floored;
};

/// The delta flavor needs `table` with rows for the centers.
CandidatePool candidate_pool(const MetricMeasureSpace& space, const DeltaTable* table, std::span<const PointId> target,
                             HausdorffFlavor flavor, const CandidateOptions& options = {});

/// Pool members admissible at scale rho, with costs scale^s.
std::vector<CoverCandidate> admissible(const CandidatePool& pool, double rho, double s);

/// Balls admissible at rho (flavor constraint applied); throws PreconditionError
/// when rho is below resolution and nothing is admissible.
std::vector<BallSpec> candidate_balls(const MetricMeasureSpace& space, const DeltaTable* table,
                                      std::span<const PointId> target, HausdorffFlavor flavor, double rho,
                                      const CandidateOptions& options = {});

struct PremeasureResult {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;  // lower came from the exact oracle
  std::optional<double> exact_cost;
  CoverSolution cover;  // the greedy cover realizing `upper`
  /// Largest realized scale used by the cover exceeds the diameter of F (same units).
  bool uses_scale_beyond_diameter = false;
};

/// Greedy upper bound and exact (or LP-free) lower bound of the premeasure of F at (s, rho).
PremeasureResult premeasure(const CandidatePool& pool, const MetricMeasureSpace& space, double s, double rho,
                            const ExactCoverLimits& limits = {});
PremeasureResult premeasure(const MetricMeasureSpace& space, const DeltaTable* table, std::span<const PointId> target,
                            double s, double rho, HausdorffFlavor flavor, const CandidateOptions& options = {},
                            const ExactCoverLimits& limits = {});

struct CurvePoint {
  double rho = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Per-s premeasure brackets over a rho grid. Brackets are tightened by
/// monotonicity in rho: a cover admissible at a finer scale is admissible at a
/// coarser one, and the premeasure itself is non-increasing in rho.
struct DimensionCurve {
  HausdorffFlavor flavor = HausdorffFlavor::metric;
  double s = 0.0;
  std::vector<CurvePoint> points;  // ascending rho
  std::optional<double> stabilized;
};

DimensionCurve dimension_curve(const CandidatePool& pool, const MetricMeasureSpace& space, double s,
                               std::span<const double> rho_grid, const ExactCoverLimits& limits = {});

enum class DimensionMethod { regression, bisection };
const char* to_string(DimensionMethod method) noexcept;

struct DimensionOptions {
  DimensionMethod method = DimensionMethod::regression;
  /// Scale range; zero selects the mesoscopic default [2 resolution, size / 4].
  double rho_lo = 0.0;
  double rho_hi = 0.0;
  std::size_t rho_count = 16;
  double bracket_width = 0.01;
  CandidateOptions candidates{};
  ExactCoverLimits limits{};
};

struct DimensionEstimate {
  HausdorffFlavor flavor = HausdorffFlavor::metric;
  DimensionMethod method = DimensionMethod::regression;
  double s_star = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;   // max |log N - fit| for regression
  double sanity_cap = 0.0;  // log|F| / log(size / rho_lo)
  double rho_lo = 0.0;
  double rho_hi = 0.0;
  std::vector<DimensionCurve> curves;
};

/// Mesoscopic scale range [2 resolution, size / 4]. The resolution is the
/// smallest scale of a candidate ball holding two points of F; the size is
/// diam(F) (metric), the mass of the smallest ball centered in F holding F (mu)
/// or diam_delta(F) (delta). Returns {0, 0} when F is a singleton.
std::pair<double, double> mesoscopic_range(const CandidatePool& pool, const MetricMeasureSpace& space);
std::pair<double, double> mesoscopic_range(const MetricMeasureSpace& space, const DeltaTable* table,
                                           std::span<const PointId> target, HausdorffFlavor flavor,
                                           const CandidateOptions& options = {});

/// regression: slope of log N(rho) against log(1/rho), N the s = 0 cover count.
/// bisection: smallest s at which the least-squares slope of log(premeasure)
/// against log(1/rho) is <= 0, bracketed to the configured width.
DimensionEstimate dimension_estimate(const MetricMeasureSpace& space, const DeltaTable* table,
                                     std::span<const PointId> target, HausdorffFlavor flavor,
                                     const DimensionOptions& options = {});

struct EquivalenceReport {
  double s = 0.0;
  double ratio_min = 0.0;  // over the grid of H upper / G upper
  double ratio_max = 0.0;
  double cross_min = 0.0;  // H lower / G upper
  double cross_max = 0.0;  // H upper / G lower
  double predicted_lo = 0.0;  // C1^s
  double predicted_hi = 0.0;  // C2^s
  double slack = 2.0;
  bool within = false;  // [ratio_min, ratio_max] inside [C1^s / slack, C2^s * slack]
  std::vector<double> rho;
  std::vector<double> ratios;
};

/// Compares the mu-relative and delta premeasures of F over a common rho grid
/// (mass units) against the normality constants C1, C2.
EquivalenceReport equivalence_ratio_H_G(const MetricMeasureSpace& space, const DeltaTable& table,
                                        std::span<const PointId> target, double s, std::span<const double> rho_grid,
                                        double C1, double C2, double slack = 2.0,
                                        const CandidateOptions& options = {});

/// Least-squares slope and max absolute residual of y against x.
std::pair<double, double> least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace homtype
