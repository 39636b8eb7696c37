#include <gtest/gtest.h>

#include <cmath>

#include "homtype/error.hpp"
#include "homtype/neighborhoods.hpp"
#include "homtype/space.hpp"
#include "homtype/structure.hpp"
#include "support.hpp"

using namespace homtype;

namespace {

MetricMeasureSpace three_points(double pq, double pz, double qz) {
  std::vector<double> m = {0, pq, pz, pq, 0, qz, pz, qz, 0};
  return MetricMeasureSpace::from_matrix("tri", m, {1, 1, 1});
}

}  // namespace

TEST(BallQuery, OpenBallExcludesUnitNeighbor) {
  const auto s = support::line(10);
  const auto b = ball_query(s, {0, 1.0});
  EXPECT_EQ(b.members, std::vector<PointId>{0});
  EXPECT_DOUBLE_EQ(b.mass, 1.0);
}

TEST(BallQuery, CenterFiveRadiusThree) {
  const auto s = support::line(10);
  const auto b = ball_query(s, {5, 3.0});
  EXPECT_EQ(b.members, (std::vector<PointId>{3, 4, 5, 6, 7}));
  EXPECT_DOUBLE_EQ(b.mass, 5.0);
}

TEST(BallQuery, ZeroRadiusOpenIsEmptyClosedIsCenter) {
  const auto s = support::line(4);
  EXPECT_TRUE(ball_query(s, {2, 0.0}).members.empty());
  EXPECT_EQ(ball_query(s, {2, 0.0, BallFlavor::d, Closure::closed}).members, std::vector<PointId>{2});
}

TEST(BallQuery, RejectsUnknownCenterAndDeltaFlavor) {
  const auto s = support::line(4);
  EXPECT_THROW(ball_query(s, {7, 1.0}), PreconditionError);
  EXPECT_THROW(ball_query(s, {1, 1.0, BallFlavor::delta}), PreconditionError);
}

TEST(BallQuery, MassMonotoneInRadius) {
  const auto s = support::random_plane(40, 3);
  for (PointId x = 0; x < s.size(); x += 7) {
    double prev = -1.0;
    std::vector<PointId> prev_members;
    for (double r = 0.0; r < 1.6; r += 0.05) {
      const auto b = ball_query(s, {x, r});
      EXPECT_GE(b.mass, prev);
      EXPECT_TRUE(std::includes(b.members.begin(), b.members.end(), prev_members.begin(), prev_members.end()));
      prev = b.mass;
      prev_members = b.members;
    }
  }
}

TEST(Neighborhoods, AgreesWithBallQuery) {
  const auto s = support::random_plane(30, 9);
  const Neighborhoods hood(s);
  for (PointId x = 0; x < s.size(); ++x)
    for (double r : {0.0, 0.1, 0.25, 0.5, 2.0}) {
      EXPECT_NEAR(hood.open_mass(x, r), ball_query(s, {x, r}).mass, 1e-12);
      EXPECT_NEAR(hood.closed_mass(x, r), ball_query(s, {x, r, BallFlavor::d, Closure::closed}).mass, 1e-12);
    }
}

TEST(Validation, RejectsBrokenMatrices) {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const SpaceError& e) {
      return e.space_code();
    }
    return SpaceErrorCode::io;
  };
  EXPECT_EQ(code_of([] { MetricMeasureSpace::from_matrix("x", {0.1, 1, 1, 0}, {1, 1}); }),
            SpaceErrorCode::nonzero_diagonal);
  EXPECT_EQ(code_of([] { MetricMeasureSpace::from_matrix("x", {0, 1, 2, 0}, {1, 1}); }), SpaceErrorCode::asymmetric);
  EXPECT_EQ(code_of([] { MetricMeasureSpace::from_matrix("x", {0, 0, 0, 0}, {1, 1}); }),
            SpaceErrorCode::nonpositive_distance);
  EXPECT_EQ(code_of([] { MetricMeasureSpace::from_matrix("x", {0, 1, 1, 0}, {1, 0}); }),
            SpaceErrorCode::nonpositive_weight);
  EXPECT_EQ(code_of([] { MetricMeasureSpace::from_coordinates("x", 1, {0.0, 0.0}, {1, 1}); }),
            SpaceErrorCode::nonpositive_distance);
}

TEST(Triangle, ExamplesFromHandEnumeration) {
  EXPECT_DOUBLE_EQ(estimate_triangle_constant(three_points(1, 1, 2)).K, 1.0);
  EXPECT_DOUBLE_EQ(estimate_triangle_constant(three_points(3, 1, 1)).K, 1.5);
}

TEST(Triangle, EuclideanIsOne) {
  EXPECT_DOUBLE_EQ(estimate_triangle_constant(support::random_plane(60, 1)).K, 1.0);
}

TEST(Triangle, SampledIsLowerBoundOfExact) {
  const auto sq = [] {
    // Squared Euclidean distance on a line: a genuine quasi-metric with K = 2.
    const std::size_t n = 25;
    std::vector<double> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i * n + j] = double((i - j) * (i - j));
    return MetricMeasureSpace::from_matrix("sq", m, std::vector<double>(n, 1.0));
  }();
  const auto exact = estimate_triangle_constant(sq, {TriangleMode::exact});
  const auto sampled = estimate_triangle_constant(sq, {TriangleMode::sampled, 5, {.triangle_sample_count = 2000}});
  EXPECT_NEAR(exact.K, 2.0, 1e-12);
  EXPECT_TRUE(sampled.lower_bound);
  EXPECT_LE(sampled.K, exact.K);
  // Every audited triple satisfies the reported constant.
  const auto [x, y, z] = exact.witness;
  EXPECT_NEAR(sq.distance(x, y), exact.K * (sq.distance(x, z) + sq.distance(z, y)), 1e-9);
  for (PointId a = 0; a < sq.size(); ++a)
    for (PointId b = 0; b < sq.size(); ++b)
      for (PointId c = 0; c < sq.size(); ++c)
        if (a != b) EXPECT_LE(sq.distance(a, b), exact.K * (sq.distance(a, c) + sq.distance(c, b)) * (1 + 1e-12));
}

TEST(Doubling, SinglePointIsOne) {
  const auto s = MetricMeasureSpace::from_coordinates("p", 1, {0.0}, {2.0});
  EXPECT_DOUBLE_EQ(estimate_doubling_constant(s).A, 1.0);
}

TEST(Doubling, MatchesDenseRadiusSweepOracle) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto s = seed == 1 ? support::line(10) : support::random_plane(15, seed);
    double oracle = 1.0;
    // Dense sweep over r; the breakpoint grid must reach the same maximum.
    for (PointId x = 0; x < s.size(); ++x)
      for (double r = 1e-4; r < 12.0; r *= 1.002) oracle = std::max(oracle, doubling_ratio(s, x, r));
    const auto est = estimate_doubling_constant(s);
    EXPECT_GE(est.A, oracle - 1e-12);
    EXPECT_DOUBLE_EQ(doubling_ratio(s, est.witness_center, est.witness_radius), est.A);
  }
}

TEST(MetricDimension, SinglePointIsOne) {
  const auto s = MetricMeasureSpace::from_coordinates("p", 1, {0.0}, {1.0});
  EXPECT_EQ(estimate_metric_dimension(s).N, 1u);
}

TEST(MetricDimension, LineBallAroundFive) {
  const auto s = support::line(10);
  const auto members = ball_query(s, {5, 2.0}).members;
  EXPECT_EQ(members, (std::vector<PointId>{4, 5, 6}));
  EXPECT_EQ(max_disperse_size(s, members, 1.0), 3u);
  EXPECT_GE(estimate_metric_dimension(s).N, 3u);
}

TEST(MetricDimension, UnitSquareNetBounded) {
  std::vector<double> coords, weights;
  const int k = 11;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      coords.push_back(i / double(k - 1));
      coords.push_back(j / double(k - 1));
      weights.push_back(1.0);
    }
  const auto s = MetricMeasureSpace::from_coordinates("net", 2, coords, weights);
  const auto est = estimate_metric_dimension(s, {}, {.max_radii = 24});
  EXPECT_LE(est.N, 25u);
  EXPECT_GE(est.N, 4u);
}

TEST(MetricDimension, GreedyNeverExceedsExact) {
  const auto s = support::random_plane(18, 4);
  const auto ids = all_points(s);
  for (double t : {0.05, 0.1, 0.2, 0.4}) {
    bool exact = false;
    const auto best = max_disperse_size(s, ids, t, {}, &exact);
    EXPECT_TRUE(exact);
    const auto greedy = max_disperse_size(s, ids, t, {.exact_disperse_ball_limit = 0}, &exact);
    EXPECT_FALSE(exact);
    EXPECT_LE(greedy, best);
  }
}

TEST(MetricDimension, DisperseGrowthWithinPowerBound) {
  const auto s = support::random_plane(60, 8);
  const auto N = estimate_metric_dimension(s).N;
  const auto ids = all_points(s);
  for (PointId x = 0; x < s.size(); x += 11)
    for (double r : {0.05, 0.1}) {
      for (int m = 1; m <= 3; ++m) {
        const auto ball = ball_query(s, {x, std::ldexp(r, m)}).members;
        const auto count = max_disperse_size(s, ball, r, {.exact_disperse_ball_limit = 0});
        EXPECT_LE(double(count), std::pow(double(N), m));
      }
    }
}

TEST(StructureConstants, ExponentsFromInequalities) {
  const auto c = make_structure_constants(1.0, 2.0, 3, false);
  EXPECT_EQ(c.ell, 2);           // 2^2 >= 3
  EXPECT_EQ(c.ell_diameter, 3);  // 2^3 >= 8
  const auto d = make_structure_constants(1.5, 2.0, 3, false);
  EXPECT_GE(std::ldexp(1.0, d.ell), 3 * 1.5 * 1.5);
  EXPECT_LT(std::ldexp(1.0, d.ell - 1), 3 * 1.5 * 1.5);
  EXPECT_THROW(make_structure_constants(0.5, 2.0, 3, false), InvariantViolation);
}

TEST(Grids, DefaultGridHasDistancesHalvesDoubles) {
  const auto s = support::line(3);
  EXPECT_EQ(default_radius_grid(s), (std::vector<double>{0.5, 1.0, 2.0, 4.0}));
}
