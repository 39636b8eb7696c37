#include <gtest/gtest.h>

#include <cmath>

#include "homtype/error.hpp"
#include "homtype/examples.hpp"
#include "homtype/regularity.hpp"
#include "support.hpp"

using namespace homtype;

namespace {

std::vector<double> counting(const MetricMeasureSpace& s) { return std::vector<double>(s.size(), 1.0); }

const double kCantorDim = std::log(2.0) / std::log(3.0);

}  // namespace

TEST(Regularity, GridCountingMeasure) {
  const auto s = support::line(40);
  const auto F = all_points(s);
  const auto nu = counting(s);
  RegularityOptions opts;
  const auto sampled = regularity_test(s, nullptr, F, nu, 1.0, RegularityFlavor::metric, opts);
  EXPECT_LE(sampled.c_best, 2.1);
  EXPECT_GE(sampled.c_best, 1.0);
  EXPECT_DOUBLE_EQ(sampled.r_min, 1.0);
  EXPECT_DOUBLE_EQ(sampled.r_max, 39.0);
  // Just above r = 1 the open ball holds three points.
  opts.exhaustive = true;
  const auto exact = regularity_test(s, nullptr, F, nu, 1.0, RegularityFlavor::metric, opts);
  EXPECT_DOUBLE_EQ(exact.c_upper, 3.0);
  EXPECT_GE(exact.c_best, sampled.c_best);
}

TEST(Regularity, MeasureAgainstItselfIsExact) {
  for (const auto& s : {support::random_plane(30, 5), support::line(25, 0.04)}) {
    const auto F = all_points(s);
    std::vector<double> nu(s.size());
    for (PointId p = 0; p < s.size(); ++p) nu[p] = s.weight(p);
    for (bool exhaustive : {false, true}) {
      RegularityOptions opts;
      opts.exhaustive = exhaustive;
      const auto rep = regularity_test(s, nullptr, F, nu, 1.0, RegularityFlavor::measure, opts);
      EXPECT_EQ(rep.c_best, 1.0);
      EXPECT_EQ(rep.c_upper, 1.0);
    }
  }
}

TEST(Regularity, ScaleCovariance) {
  const auto ex = cantor_space(6);
  const auto& nu = ex.measure("natural").weights;
  const auto base = regularity_test(ex.space, nullptr, ex.F, nu, kCantorDim, RegularityFlavor::metric);
  for (double lambda : {0.25, 3.0}) {
    std::vector<double> scaled(nu.begin(), nu.end());
    for (auto& w : scaled) w *= lambda;
    const auto rep = regularity_test(ex.space, nullptr, ex.F, scaled, kCantorDim, RegularityFlavor::metric);
    EXPECT_NEAR(rep.c_upper, lambda * base.c_upper, 1e-12 * rep.c_upper);
    EXPECT_NEAR(rep.c_lower, base.c_lower / lambda, 1e-12 * rep.c_lower);
  }
}

TEST(Regularity, RejectsBadInputs) {
  const auto s = support::line(10);
  const std::vector<PointId> F{0, 1, 2};
  auto nu = counting(s);
  EXPECT_THROW(regularity_test(s, nullptr, F, nu, 1.0, RegularityFlavor::metric), PreconditionError);
  std::vector<double> on_F(10, 0.0);
  on_F[0] = on_F[1] = on_F[2] = 1.0;
  EXPECT_THROW(regularity_test(s, nullptr, F, on_F, 1.0, RegularityFlavor::delta), PreconditionError);
  RegularityOptions local;
  local.local = true;
  EXPECT_THROW(regularity_test(s, nullptr, F, on_F, 1.0, RegularityFlavor::metric, local), PreconditionError);
  const std::vector<PointId> one{4};
  EXPECT_THROW(regularity_test(s, nullptr, one, std::vector<double>(10, 0.0), 1.0, RegularityFlavor::metric),
               PreconditionError);
}

TEST(Regularity, VanishingMassGlobalAndLocal) {
  // nu charges only 0 and 9 of F = X: every ball around 4 of radius < 5 is empty.
  const auto s = support::line(10);
  const auto F = all_points(s);
  std::vector<double> nu(10, 0.0);
  nu[0] = nu[9] = 1.0;
  EXPECT_THROW(regularity_test(s, nullptr, F, nu, 1.0, RegularityFlavor::metric), InvariantViolation);
  RegularityOptions opts;
  opts.local = true;
  opts.r_hi = 9.0;
  opts.exhaustive = true;
  const auto rep = regularity_test(s, nullptr, F, nu, 1.0, RegularityFlavor::metric, opts);
  EXPECT_TRUE(rep.range_raised);
  EXPECT_GT(rep.r_min, 1.0);
  for (const auto& smp : rep.samples) EXPECT_GT(smp.nu, 0.0);
}

TEST(Regularity, PowerLawFitRecoversExponent) {
  std::vector<double> r, v;
  for (int k = 1; k <= 10; ++k) {
    r.push_back(0.1 * k);
    v.push_back(3.0 * std::pow(0.1 * k, 1.7));
  }
  const auto fit = fit_power_law(r, v);
  EXPECT_NEAR(fit.s, 1.7, 1e-12);
  EXPECT_NEAR(fit.log_constant, std::log(3.0), 1e-12);
  EXPECT_THROW(fit_power_law(std::vector<double>{1, 1, 2}, std::vector<double>{1, 1, 2}), PreconditionError);
}

TEST(Regularity, CantorExponentAndConstant) {
  const auto ex = cantor_space(8);
  const auto& nu = ex.measure("natural").weights;
  const auto fit = fit_exponent(ex.space, nullptr, ex.F, nu, RegularityFlavor::metric);
  EXPECT_NEAR(fit.s, kCantorDim, 0.03);
  const auto rep = regularity_test(ex.space, nullptr, ex.F, nu, kCantorDim, RegularityFlavor::metric);
  EXPECT_LT(rep.c_best, 4.0);
}

TEST(Regularity, HalfLineArclengthAgainstAreaMeasure) {
  // Lebesgue area in the plane: mu(B) ~ r^2, arclength on the half-line ~ r.
  // Centers near the ends of F see one-sided balls, which pulls the pooled fit down.
  const auto ex = weighted_plane(0.0, 1.0, 7.0, 0.125, 5.0);
  const auto& nu = ex.measure("nu_arclength").weights;
  RegularityOptions opts;
  opts.r_hi = 1.0;
  const auto fit = fit_exponent(ex.space, nullptr, ex.F, nu, RegularityFlavor::measure, opts);
  EXPECT_NEAR(fit.s, 0.5, 0.08);
  const auto metric = fit_exponent(ex.space, nullptr, ex.F, nu, RegularityFlavor::metric, opts);
  EXPECT_NEAR(metric.s, 1.0, 0.08);
}

TEST(Consistency, SingleWindowAndSweeps) {
  const auto s = support::line(10, 0.1);
  const auto F = all_points(s);
  const std::vector<double> R{0.5, 1.5, 3.0};
  const auto prof = consistency_profile(s, F, R);
  EXPECT_EQ(prof.verdict, ConsistencyVerdict::consistent);
  EXPECT_DOUBLE_EQ(prof.inf_mass[0], 0.1);
  EXPECT_DOUBLE_EQ(prof.inf_mass[1], 0.2);

  // Windows whose weights fall like 1/T: infima decay at slope -1.
  std::vector<MetricMeasureSpace> spaces;
  std::vector<double> labels{10, 20, 40, 80};
  for (double T : labels) spaces.push_back(support::line(10, 1.0 / T));
  std::vector<TruncationWindow> vanishing, flat;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    vanishing.push_back({labels[i], &spaces[i], F});
    flat.push_back({labels[i], &s, F});
  }
  const auto v = consistency_sweep(vanishing, R);
  EXPECT_EQ(v.verdict, ConsistencyVerdict::vanishing);
  EXPECT_NEAR(v.trend_slope[0], -1.0, 1e-9);
  EXPECT_EQ(consistency_sweep(flat, R).verdict, ConsistencyVerdict::consistent);
  // Slow decay, neither bounded below by half nor at slope -1/2.
  std::vector<MetricMeasureSpace> slow;
  for (double T : labels) slow.push_back(support::line(10, 1.0 / std::pow(T, 0.4)));
  std::vector<TruncationWindow> w;
  for (std::size_t i = 0; i < labels.size(); ++i) w.push_back({labels[i], &slow[i], F});
  EXPECT_EQ(consistency_sweep(w, R).verdict, ConsistencyVerdict::undetermined);
}

TEST(SmallRadius, ThresholdOnTheLine) {
  const auto s = support::line(10, 0.1);
  const auto F = all_points(s);
  const auto t = small_radius_threshold(s, F, 1.5);
  EXPECT_NEAR(t.C, 0.15, 1e-12);
  EXPECT_TRUE(t.certified);
  EXPECT_FALSE(t.inconsistent);
  EXPECT_EQ(t.argmin, 0u);
  EXPECT_THROW(small_radius_threshold(s, F, 0.5), PreconditionError);
}

TEST(Theorem21, CantorPassesAndFaultIsCaught) {
  const auto ex = cantor_host(4, 5);
  const auto table = DeltaTable::compute(ex.space);
  const auto consts = estimate_structure_constants(ex.space);
  const auto& nu = ex.measure("natural").weights;
  RegularityOptions opts;
  opts.exhaustive = true;
  const auto rep = regularity_test(ex.space, &table, ex.F, nu, kCantorDim, RegularityFlavor::delta, opts);
  const auto audit = verify_theorem_2_1(ex.space, ex.F, nu, rep, consts);
  EXPECT_TRUE(audit.passed);
  EXPECT_GT(audit.audited_upper, 0u);
  EXPECT_GT(audit.audited_lower, 0u);
  EXPECT_GE(audit.min_upper_margin, 1.0);
  EXPECT_GE(audit.min_lower_margin, 1.0);

  std::vector<double> faulty(nu.begin(), nu.end());
  faulty[ex.F[3]] *= 10.0;
  const auto bad = verify_theorem_2_1(ex.space, ex.F, faulty, rep, consts);
  EXPECT_FALSE(bad.passed);
  EXPECT_FALSE(bad.violations.empty());

  RegularityOptions sampled;
  const auto coarse = regularity_test(ex.space, &table, ex.F, nu, kCantorDim, RegularityFlavor::delta, sampled);
  EXPECT_THROW(verify_theorem_2_1(ex.space, ex.F, nu, coarse, consts), PreconditionError);
}

TEST(Theorem22, CantorInUniformHost) {
  const auto ex = cantor_host(5, 5);
  const auto table = DeltaTable::compute(ex.space);
  const auto consts = estimate_structure_constants(ex.space);
  const auto norm = normality_constants(table);
  const auto& nu = ex.measure("natural").weights;
  RegularityOptions opts;
  opts.exhaustive = true;
  const auto rep = regularity_test(ex.space, nullptr, ex.F, nu, kCantorDim, RegularityFlavor::measure, opts);
  Theorem22Options t;
  t.radius_count = 6;
  const auto audit =
      verify_theorem_2_2(ex.space, table, ex.F, rep, consts, norm.sandwich_C1, norm.sandwich_C2, nullptr, t);
  EXPECT_TRUE(audit.violations.empty());
  EXPECT_TRUE(audit.proposition.lower_ok);
  EXPECT_GT(audit.r1, audit.r_lo);
  EXPECT_FALSE(audit.samples.empty());
  EXPECT_TRUE(audit.passed);
}

TEST(Theorem22, RefusesVanishingProfile) {
  const auto ex = cantor_host(3, 3);
  const auto table = DeltaTable::compute(ex.space);
  const auto consts = estimate_structure_constants(ex.space);
  const auto& nu = ex.measure("natural").weights;
  const auto rep = regularity_test(ex.space, nullptr, ex.F, nu, kCantorDim, RegularityFlavor::measure);
  ConsistencyProfile prof;
  prof.verdict = ConsistencyVerdict::vanishing;
  prof.trend_slope = {-1.0};
  EXPECT_THROW(verify_theorem_2_2(ex.space, table, ex.F, rep, consts, 0.5, 2.0, &prof), HypothesisRefusal);
}
