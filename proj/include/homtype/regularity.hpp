#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homtype/covering.hpp"
#include "homtype/hausdorff.hpp"
#include "homtype/normalization.hpp"
#include "homtype/space.hpp"
#include "homtype/structure.hpp"

namespace homtype {

/// metric: nu(B(x,r)) against r^s. measure: nu(B(x,r)) against mu(B(x,r))^s.
/// delta: nu(B_delta(x,r)) against r^s with r in mass units.
enum class RegularityFlavor { metric, measure, delta };

const char* to_string(RegularityFlavor flavor) noexcept;
RegularityFlavor parse_regularity_flavor(const std::string& text);

struct RegularityOptions {
  /// Audited radius interval (lo, hi). Zero picks the resolution of F (smallest
  /// positive d or delta between points of F) and diam(F) in the flavor's units.
  double r_lo = 0.0;
  double r_hi = 0.0;
  /// Local test: hi is r0 and must be set.
  bool local = false;
  /// Exhaustive: every breakpoint of the ball-mass step functions, giving the
  /// exact extremes over the whole open interval. Otherwise a log-thinned grid of
  /// realized radii per center.
  bool exhaustive = false;
  std::size_t radius_count = 24;
  /// Centers audited; 0 audits all of F when |F| <= 2000, else a seeded sample.
  std::size_t max_centers = 0;
  std::uint64_t seed = 0;
  bool keep_samples = true;
};

struct RegularitySample {
  PointId x = 0;
  double r = 0.0;
  double nu = 0.0;
  double ref = 0.0;    // r (metric, delta) or mu(B) (measure)
  double ratio = 0.0;  // nu / ref^s
};

struct RegularityReport {
  RegularityFlavor flavor = RegularityFlavor::metric;
  double s = 0.0;
  double c_best = 1.0;
  double c_upper = 0.0;  // max nu / ref^s
  double c_lower = 0.0;  // max ref^s / nu
  double r_min = 0.0;
  double r_max = 0.0;
  bool local = false;
  bool exhaustive = false;
  /// Local tests whose lower end was raised past radii where nu vanished.
  bool range_raised = false;
  double diam_d = 0.0;
  double diam_delta = 0.0;  // only for the delta flavor
  std::size_t audited = 0;
  RegularitySample witness_low;   // smallest ratio
  RegularitySample witness_high;  // largest ratio
  std::vector<RegularitySample> samples;
};

/// c_best = max over audited (x in F, r) of max(ref^s / nu, nu / ref^s). Balls
/// use open closure. In exhaustive mode each step interval contributes the
/// supremum at its left end and the infimum at its right end, so c_best is the
/// exact constant over (r_lo, r_hi); those samples carry the limiting radius.
/// `nu` holds one weight per point of X and must vanish off F. The delta flavor
/// needs table rows for F.
RegularityReport regularity_test(const MetricMeasureSpace& space, const DeltaTable* table,
                                 std::span<const PointId> target, std::span<const double> nu, double s,
                                 RegularityFlavor flavor, const RegularityOptions& options = {});

struct PowerLawFit {
  double s = 0.0;
  double log_constant = 0.0;
  double residual = 0.0;  // max |log nu - fit|
  std::size_t samples = 0;
};

/// Least-squares slope of log values against log refs.
PowerLawFit fit_power_law(std::span<const double> refs, std::span<const double> values);

/// Exponent of nu(B) against the flavor's reference over the sampled (x, r).
PowerLawFit fit_exponent(const MetricMeasureSpace& space, const DeltaTable* table, std::span<const PointId> target,
                         std::span<const double> nu, RegularityFlavor flavor, const RegularityOptions& options = {});

enum class ConsistencyVerdict { consistent, vanishing, undetermined };
const char* to_string(ConsistencyVerdict verdict) noexcept;

struct ConsistencyProfile {
  std::vector<double> R_grid;
  std::vector<double> inf_mass;  // per R, over the (last) window
  std::vector<PointId> argmin;
  /// Truncation sweep: window labels and per-window infima (window x R).
  std::vector<double> window_labels;
  std::vector<std::vector<double>> trend;
  /// Per R: slope of log inf_mass against log label over the sweep.
  std::vector<double> trend_slope;
  ConsistencyVerdict verdict = ConsistencyVerdict::consistent;
};

/// inf over x in F of mass(B(x, R)) (open balls) for each R. A single bounded
/// window is consistent whenever every infimum is positive.
ConsistencyProfile consistency_profile(const MetricMeasureSpace& space, std::span<const PointId> target,
                                       std::span<const double> R_grid);

struct TruncationWindow {
  double label = 0.0;  // e.g. the window end T
  const MetricMeasureSpace* space = nullptr;
  std::vector<PointId> target;
};

/// Infima per growing window. Verdict: vanishing when for every R the series is
/// non-increasing and decays at least like label^(-1/2) (log-log slope <= -1/2);
/// consistent when for every R the last infimum keeps at least half the first;
/// undetermined otherwise.
ConsistencyProfile consistency_sweep(std::span<const TruncationWindow> windows, std::span<const double> R_grid);

struct SmallRadiusThreshold {
  double r0 = 0.0;
  double C = 0.0;
  double inf_mass = 0.0;  // inf over F of mass(B(x, r0))
  PointId argmin = 0;
  double quantum = 0.0;   // half the smallest atom of X
  bool certified = false;
  bool inconsistent = false;
};

/// C = inf_{x in F} mass(B(x, r0)) - quantum, certified by checking that every
/// ball B(x, t) with x in F and t >= r0 on the distance grid has mass > C.
/// Requires r0 above the smallest positive distance from F.
SmallRadiusThreshold small_radius_threshold(const MetricMeasureSpace& space, std::span<const PointId> target,
                                            double r0);

struct BoundViolation {
  PointId x = 0;
  double r = 0.0;       // closed d-ball radius (Theorem 2.1) or delta radius
  double value = 0.0;   // nu(B) or a premeasure bracket end
  double mass = 0.0;    // mu(B) (Theorem 2.1)
  double bound = 0.0;
  bool upper = true;
};

struct Theorem21Report {
  double s = 0.0;
  double c = 1.0;
  double r0 = 0.0;    // upper end of the delta report's range
  double r_lo = 0.0;  // lower end of the delta report's range
  double A = 1.0;
  int ell = 0;
  double upper_factor = 0.0;  // c 2^s
  double lower_factor = 0.0;  // c^-1 A^(-ell s)
  std::size_t audited_upper = 0;
  std::size_t audited_lower = 0;
  std::size_t skipped = 0;  // balls whose delta radii fall outside the report's range
  double min_upper_margin = 0.0;  // min bound / nu
  double min_lower_margin = 0.0;  // min nu / bound
  std::vector<BoundViolation> violations;
  bool passed = false;
};

/// For every x in F and every d-ball B = B(x, r) (all breakpoints) with
/// mu(B) < r0 / 2: nu(B) <= c 2^s mu(B)^s, and nu(B) >= c^-1 A^(-ell s) mu(B)^s
/// when mu(B) < A^ell r0. Each side is audited only when its delta radius
/// (2 mu(B), resp. A^-ell mu(B)) lies inside the delta report's range. Requires
/// an exhaustive delta-flavor report.
Theorem21Report verify_theorem_2_1(const MetricMeasureSpace& space, std::span<const PointId> target,
                                   std::span<const double> nu, const RegularityReport& delta_report,
                                   const StructureConstants& constants);

struct Theorem22Options {
  std::size_t radius_count = 12;
  /// Premeasure scale for the restriction of H^s; zero picks the mesoscopic
  /// lower end of F for the mu flavor.
  double rho_star = 0.0;
  CandidateOptions candidates{};
  ExactCoverLimits limits{};
  /// Overlap constant of the small-measure cover; unset skips the upper chain check.
  std::optional<double> Lambda;
  std::size_t max_centers = 0;
  std::uint64_t seed = 0;
};

struct Proposition23Report {
  double c_m = 1.0;          // constant of the input measure
  double c_lower = 0.0;      // max mu(B)^s / H.lower
  double c_upper = 0.0;      // max H.upper / mu(B)^s
  double c_H = 1.0;          // max(c_lower, c_upper, 1)
  double chain_lower = 0.0;  // c_m^2
  double chain_upper = 0.0;  // c_m^2 Lambda A^j
  int j = 0;                 // smallest with 2^(j-2) >= K^2
  std::optional<double> Lambda;
  bool lower_ok = false;
  std::optional<bool> upper_ok;
  std::size_t samples = 0;
};

struct Theorem22Sample {
  PointId x = 0;
  double r = 0.0;  // delta radius
  std::size_t trace = 0;  // |B_delta(x, r) within F|
  double lower = 0.0;
  double upper = 0.0;
  double bound_lo = 0.0;
  double bound_hi = 0.0;
  bool certified = false;
};

struct Theorem22Report {
  double s = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  SmallRadiusThreshold threshold;
  double r0 = 0.0;
  double r1 = 0.0;
  double r_lo = 0.0;
  double total_mass = 0.0;
  double rho_star = 0.0;
  Proposition23Report proposition;
  std::vector<Theorem22Sample> samples;
  std::vector<BoundViolation> violations;  // brackets entirely outside the bounds
  std::size_t uncertified = 0;             // brackets straddling a bound
  bool passed = false;
};

/// Measure-flavor report of (F, m, s) supplies c and r0. Refuses with
/// HypothesisRefusal when a supplied truncation profile is vanishing or the
/// small-radius threshold is zero. Otherwise measures the constant of the
/// restriction of H^s to F against mu(B)^s (compared with the chain c^2 and
/// c^2 Lambda A^j), then audits c_H^-1 C1^s r^s <= H(B_delta(x,r) within F) <=
/// c_H C2^s r^s for r below r1 = min(2 mu(X), C / C2). The table needs rows for F.
Theorem22Report verify_theorem_2_2(const MetricMeasureSpace& space, const DeltaTable& table,
                                   std::span<const PointId> target, const RegularityReport& measure_report,
                                   const StructureConstants& constants, double C1, double C2,
                                   const ConsistencyProfile* consistency = nullptr,
                                   const Theorem22Options& options = {});

}  // namespace homtype
