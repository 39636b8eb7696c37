#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "homtype/covering.hpp"
#include "homtype/error.hpp"
#include "homtype/examples.hpp"
#include "homtype/normalization.hpp"
#include "homtype/structure.hpp"
#include "support.hpp"

using namespace homtype;

namespace {

std::vector<CoverCandidate> all_balls(const MetricMeasureSpace& s, double power) {
  std::vector<CoverCandidate> out;
  for (PointId z = 0; z < s.size(); ++z)
    for (PointId w = 0; w < s.size(); ++w) {
      const double r = s.distance(z, w);
      const BallSpec b{z, r, BallFlavor::d, Closure::closed};
      out.push_back(make_candidate(s, b, r > 0.0 ? std::pow(r, power) : 0.05));
    }
  return out;
}

/// Exhaustive set cover over all candidate subsets (small pools only).
double brute_force_cover(std::span<const PointId> F, std::span<const CoverCandidate> c) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t m = c.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << m); ++mask) {
    double cost = 0.0;
    std::vector<char> hit(F.size(), 0);
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) {
        cost += c[i].cost;
        for (std::size_t k = 0; k < F.size(); ++k)
          if (std::binary_search(c[i].members.begin(), c[i].members.end(), F[k])) hit[k] = 1;
      }
    if (std::all_of(hit.begin(), hit.end(), [](char h) { return h != 0; })) best = std::min(best, cost);
  }
  return best;
}

}  // namespace

TEST(Disperse, GridThreeGivesEveryThirdPoint) {
  const auto s = support::line(10);
  const auto host = all_points(s);
  const auto u = maximal_disperse_set(s, host, 3.0);
  EXPECT_EQ(u.members, (std::vector<PointId>{0, 3, 6, 9}));
  EXPECT_TRUE(u.maximal);
}

TEST(Disperse, LargeThresholdGivesSingleton) {
  const auto s = support::line(10);
  const auto host = all_points(s);
  EXPECT_EQ(maximal_disperse_set(s, host, 100.0).members, (std::vector<PointId>{0}));
  EXPECT_THROW(maximal_disperse_set(s, host, 0.0), PreconditionError);
  EXPECT_TRUE(maximal_disperse_set(s, std::vector<PointId>{}, 1.0).members.empty());
}

TEST(Disperse, UniformSpaceDeltaKeepsAllPoints) {
  const auto s = support::equidistant(7);
  const auto table = DeltaTable::compute(s);
  const auto host = all_points(s);
  EXPECT_EQ(maximal_disperse_set(table, host, 0.5).members.size(), 7u);
}

TEST(Disperse, SeededOrdersStayDisperseAndMaximal) {
  const auto s = support::random_plane(40, 3);
  const auto host = all_points(s);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto u = maximal_disperse_set(s, host, 0.2, seed);
    for (PointId a : u.members)
      for (PointId b : u.members)
        if (a != b) EXPECT_GE(s.distance(a, b), 0.2);
    for (PointId x : host) {
      double nearest = std::numeric_limits<double>::infinity();
      for (PointId a : u.members) nearest = std::min(nearest, s.distance(x, a));
      EXPECT_LT(nearest, 0.2);
    }
  }
}

TEST(Disperse, PackingBoundInsideDoubledBalls) {
  const auto s = support::random_plane(60, 8);
  const auto host = all_points(s);
  const auto N = estimate_metric_dimension(s).N;
  const double t = 0.15;
  const auto u = maximal_disperse_set(s, host, t);
  for (int m = 1; m <= 3; ++m)
    for (PointId x : host) {
      std::size_t inside = 0;
      for (PointId a : u.members) inside += s.distance(x, a) < std::ldexp(t, m);
      EXPECT_LE(double(inside), std::pow(double(N), m));
    }
}

TEST(Overlap, DisjointAndRepeatedBalls) {
  const auto s = support::line(10);
  const std::vector<BallSpec> disjoint{{0, 1.0, BallFlavor::d, Closure::open}, {5, 1.5, BallFlavor::d, Closure::open}};
  EXPECT_EQ(overlap_count(s, disjoint).max, 1u);
  const std::vector<BallSpec> twice{{3, 2.0, BallFlavor::d, Closure::open}, {3, 2.0, BallFlavor::d, Closure::open}};
  const auto stats = overlap_count(s, twice);
  EXPECT_EQ(stats.max, 2u);
  EXPECT_EQ(stats.histogram[2], 3u);
  EXPECT_EQ(stats.histogram[0], 7u);
}

TEST(Greedy, SingleBallHoldingEverything) {
  const auto s = support::line(5);
  const auto F = all_points(s);
  std::vector<CoverCandidate> c{make_candidate(s, {2, 2.0, BallFlavor::d, Closure::closed}, 0.0),
                                make_candidate(s, {0, 0.0, BallFlavor::d, Closure::closed}, 1.0)};
  const auto sol = greedy_weighted_cover(s, F, c);
  ASSERT_TRUE(sol.feasible);
  EXPECT_EQ(sol.balls.size(), 1u);
  EXPECT_EQ(sol.cost, 0.0);
}

TEST(Greedy, InfeasiblePoolReportsResidue) {
  const auto s = support::line(5);
  const auto F = all_points(s);
  std::vector<CoverCandidate> c{make_candidate(s, {0, 1.0, BallFlavor::d, Closure::closed}, 1.0)};
  const auto sol = greedy_weighted_cover(s, F, c);
  EXPECT_FALSE(sol.feasible);
  EXPECT_EQ(sol.uncovered, (std::vector<PointId>{2, 3, 4}));
  EXPECT_THROW(exact_cover_oracle(s, F, c), PreconditionError);
}

TEST(Exact, FourCollinearPointsMatchBruteForce) {
  const auto s = support::line(4);
  const auto F = all_points(s);
  const auto c = all_balls(s, 1.0);
  std::vector<CoverCandidate> distinct;
  for (const auto& x : c) {
    bool seen = false;
    for (const auto& y : distinct) seen |= y.members == x.members && y.cost <= x.cost;
    if (!seen) distinct.push_back(x);
  }
  ASSERT_LE(distinct.size(), 20u);
  const auto exact = exact_cover_oracle(s, F, c);
  EXPECT_NEAR(exact.cost, brute_force_cover(F, distinct), 1e-12);
  EXPECT_LE(exact.cost, greedy_weighted_cover(s, F, c).cost + 1e-12);
}

TEST(Exact, OnePointAndConstructedDominance) {
  const auto s = MetricMeasureSpace::from_coordinates("pair", 1, std::vector<double>{0.0, 10.0},
                                                      std::vector<double>{1.0, 1.0});
  const std::vector<PointId> one{1};
  std::vector<CoverCandidate> c{make_candidate(s, {1, 0.0, BallFlavor::d, Closure::closed}, 0.7),
                                make_candidate(s, {0, 10.0, BallFlavor::d, Closure::closed}, 0.9)};
  EXPECT_DOUBLE_EQ(exact_cover_oracle(s, one, c).cost, 0.7);
  c.push_back(make_candidate(s, {0, 0.0, BallFlavor::d, Closure::closed}, 0.7));
  const auto both = all_points(s);
  const auto sol = exact_cover_oracle(s, both, c);
  EXPECT_DOUBLE_EQ(sol.cost, 0.9);
  EXPECT_EQ(sol.balls.size(), 1u);
}

TEST(Exact, RefusesBeyondLimits) {
  const auto s = support::line(16);
  const auto F = all_points(s);
  EXPECT_THROW(exact_cover_oracle(s, F, all_balls(s, 1.0)), LimitExceeded);
}

TEST(Exact, SeededInstancesBracketGreedy) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto s = uniform_random_space(10, 2, seed).space;
    const auto F = all_points(s);
    const auto c = all_balls(s, 1.0);
    const auto exact = exact_cover_oracle(s, F, c, {14, 100});
    const auto greedy = greedy_weighted_cover(s, F, c);
    ASSERT_TRUE(exact.feasible);
    EXPECT_LE(exact.cost, greedy.cost * (1.0 + 1e-12)) << seed;
    EXPECT_LE(greedy.cost, (1.0 + std::log(10.0)) * exact.cost) << seed;
    EXPECT_LE(cover_lower_bound(F, c), exact.cost * (1.0 + 1e-12)) << seed;
    EXPECT_TRUE(certify_cover(s, F, exact.balls).covers);
  }
}

TEST(Exact, PruningAgreesWithBruteForceOnRandomCosts) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = support::random_plane(6, 100 + trial);
    const auto F = all_points(s);
    std::vector<CoverCandidate> c;
    for (PointId z = 0; z < 6; ++z)
      for (double r : {0.0, 0.2, 0.45}) c.push_back(make_candidate(s, {z, r, BallFlavor::d, Closure::closed}, u(gen)));
    EXPECT_NEAR(exact_cover_oracle(s, F, c).cost, brute_force_cover(F, c), 1e-12) << trial;
  }
}

TEST(SmallMeasure, SingletonTarget) {
  const auto s = support::line(10, 0.1);
  const auto table = DeltaTable::compute(s);
  const auto consts = make_structure_constants(1.0, 2.0, 2, false);
  const std::vector<PointId> G{4};
  const auto out = small_measure_cover(table, consts, G, 0.5, {estimate_triangle_constant(table).K, 3});
  EXPECT_EQ(out.cover.balls.size(), 1u);
  EXPECT_TRUE(out.certificate.covers);
}

TEST(SmallMeasure, GridCertificatesPass) {
  const auto s = support::line(20, 1.0 / 20.0);
  const auto table = DeltaTable::compute(s);
  const auto consts = estimate_structure_constants(s);
  const double Kt = estimate_triangle_constant(table).K;
  const std::size_t Nt = estimate_metric_dimension(table).N;
  const auto G = all_points(s);
  for (double frac : {0.1, 0.3}) {
    const double rho = frac * 1.0;
    const auto out = small_measure_cover(table, consts, G, rho, {Kt, Nt});
    const auto& cert = out.certificate;
    EXPECT_TRUE(cert.passed()) << frac;
    EXPECT_TRUE(cert.radius_remark_applies);
    EXPECT_LE(cert.max_radius, cert.target_diameter);
    const auto recount = certify_cover(s, G, out.cover.balls);
    EXPECT_TRUE(recount.covers);
    EXPECT_LT(recount.max_mass, rho);
    EXPECT_EQ(recount.max_overlap, out.cover.max_overlap);
    EXPECT_EQ(overlap_count(s, out.cover.balls).max, out.cover.max_overlap);
    EXPECT_EQ(cert.m, smallest_power_of_two_exponent(8.0 * Kt * std::pow(consts.A, consts.ell_diameter + cert.p + 1)));
  }
}

TEST(SmallMeasure, CantorLevelSix) {
  const auto ex = cantor_space(6);
  const auto table = DeltaTable::compute(ex.space);
  const auto consts = estimate_structure_constants(ex.space);
  const double Kt = estimate_triangle_constant(table).K;
  const std::size_t Nt = estimate_metric_dimension(table).N;
  const auto out = small_measure_cover(table, consts, ex.F, 1.0 / 16.0, {Kt, Nt});
  EXPECT_TRUE(out.certificate.masses_below_rho);
  EXPECT_TRUE(out.certificate.overlap_within_bound);
  EXPECT_TRUE(out.certificate.passed());
}
