#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "homtype/error.hpp"
#include "homtype/examples.hpp"
#include "homtype/structure.hpp"

using namespace homtype;

TEST(Cantor, LevelOne) {
  const auto ex = cantor_space(1);
  ASSERT_EQ(ex.space.size(), 2u);
  EXPECT_DOUBLE_EQ(ex.space.distance(0, 1), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(ex.measure("natural").weights[0], 0.5);
  EXPECT_DOUBLE_EQ(ex.space.weight(1), 0.5);
}

TEST(Cantor, LevelThreeGap) {
  const auto ex = cantor_space(3);
  EXPECT_EQ(ex.space.size(), 8u);
  // Left endpoints sit 2/27 apart; the gap between surviving intervals is 1/27.
  EXPECT_DOUBLE_EQ(min_positive_distance(ex.space, ex.F), 2.0 / 27.0);
  EXPECT_DOUBLE_EQ(min_positive_distance(ex.space, ex.F) - 1.0 / 27.0, 1.0 / 27.0);
  EXPECT_THROW(cantor_space(0), PreconditionError);
  EXPECT_THROW(cantor_space(13), PreconditionError);
}

TEST(Cantor, CylinderMassesAreSelfSimilar) {
  const int L = 6;
  const auto ex = cantor_space(L);
  for (int j = 0; j <= L; ++j) {
    // Level-j cylinders are consecutive blocks of 2^(L-j) points.
    const std::size_t block = std::size_t(1) << (L - j);
    for (std::size_t start = 0; start < ex.space.size(); start += block) {
      double mass = 0.0;
      for (std::size_t k = start; k < start + block; ++k) mass += ex.space.weight(k);
      EXPECT_DOUBLE_EQ(mass, std::ldexp(1.0, -j));
    }
  }
}

TEST(Cantor, DoublingNearTwoOnSelfSimilarScales) {
  const auto ex = cantor_space(3);
  for (PointId x = 0; x < ex.space.size(); ++x)
    for (int j = 1; j <= 2; ++j) {
      const double r = std::pow(3.0, -j);
      const double small = ball_query(ex.space, {x, r, BallFlavor::d, Closure::closed}).mass;
      const double big = ball_query(ex.space, {x, 3.0 * r, BallFlavor::d, Closure::closed}).mass;
      EXPECT_LE(big, 2.0 * small + 1e-12);
    }
}

TEST(CantorHost, TargetSitsOnHostGrid) {
  const auto ex = cantor_host(3, 4);
  EXPECT_EQ(ex.space.size(), 82u);
  EXPECT_EQ(ex.F.size(), 8u);
  const auto& nu = ex.measure("natural").weights;
  double total = 0.0;
  for (PointId p = 0; p < ex.space.size(); ++p) {
    total += nu[p];
    if (!std::binary_search(ex.F.begin(), ex.F.end(), p)) EXPECT_EQ(nu[p], 0.0);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Grid, WeightsAndSpacing) {
  const auto ex = grid1d(5, 0.5, 2.0);
  EXPECT_DOUBLE_EQ(ex.space.distance(0, 4), 2.0);
  EXPECT_DOUBLE_EQ(ex.space.weight(3), 0.4);
}

TEST(Sierpinski, VertexCountAndMass) {
  const auto ex = sierpinski_gasket(3);
  EXPECT_EQ(ex.space.size(), 42u);  // (3^(L+1) + 3) / 2
  double total = 0.0;
  for (PointId p = 0; p < ex.space.size(); ++p) total += ex.space.weight(p);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(WeightedPlane, LebesgueCellsForBetaZero) {
  const auto ex = weighted_plane(0.0, 1.0, 2.0, 0.25, 0.0);
  for (PointId p = 0; p < ex.space.size(); ++p) EXPECT_DOUBLE_EQ(ex.space.weight(p), 0.0625);
  EXPECT_EQ(ex.F.size(), 5u);  // t in {1, 1.25, ..., 2}
}

TEST(WeightedPlane, CellIntegralsMatchClosedForms) {
  // Origin cell of side h under |y|^beta: polar integral over the square.
  const double h = 0.5;
  // Away from the origin: compare against a fine midpoint rule.
  for (double beta : {1.0, -1.0, 2.5}) {
    const double cx = 0.75, cy = -0.25;
    double ref = 0.0;
    const int k = 400;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const double x = cx - h / 2 + (i + 0.5) * h / k, y = cy - h / 2 + (j + 0.5) * h / k;
        ref += std::pow(std::hypot(x, y), beta) * (h / k) * (h / k);
      }
    EXPECT_NEAR(cell_mass(beta, cx, cy, h), ref, 1e-5 * ref) << beta;
  }
  // beta = 2 has the closed form h^4 / 6 on the origin cell.
  EXPECT_NEAR(cell_mass(2.0, 0.0, 0.0, h), std::pow(h, 4) / 6.0, 1e-12);
  EXPECT_THROW(weighted_plane(-2.0, 1.0, 2.0, 0.25, 0.0), PreconditionError);
}

TEST(WeightedPlane, BallMassesTrackRadialWeight) {
  const auto ex = weighted_plane(1.0, 1.0, 4.0, 0.125, 3.0);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (PointId x : ex.F)
    for (double r : {0.25, 0.375, 0.5}) {
      const double t = ex.space.coordinates()[2 * x];
      const double mass = ball_query(ex.space, {x, r, BallFlavor::d, Closure::open}).mass;
      const double ratio = mass / (r * r * t);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  EXPECT_GT(lo, 1.0);
  EXPECT_LT(hi / lo, 3.0);
}

TEST(WeightedPlane, MeasuresOnTheHalfLine) {
  const auto ex = weighted_plane(1.0, 1.0, 2.0, 0.25, 0.0);
  const auto& nu = ex.measure("nu_remark").weights;
  const auto& arc = ex.measure("nu_arclength").weights;
  for (PointId p : ex.F) {
    const double t = ex.space.coordinates()[2 * p];
    EXPECT_DOUBLE_EQ(nu[p], std::sqrt(t) * 0.25);
    EXPECT_DOUBLE_EQ(arc[p], 0.25);
  }
}

TEST(UniformRandom, DeterministicAndEuclidean) {
  const auto a = uniform_random_space(10, 2, 1);
  const auto b = uniform_random_space(10, 2, 1);
  const auto c = uniform_random_space(10, 2, 2);
  bool differs = false;
  for (PointId i = 0; i < 10; ++i) {
    for (PointId j = 0; j < 10; ++j) EXPECT_EQ(a.space.distance(i, j), b.space.distance(i, j));
    differs |= a.space.distance(0, i) != c.space.distance(0, i);
    EXPECT_DOUBLE_EQ(a.space.weight(i), 0.1);
  }
  EXPECT_TRUE(differs);
  TriangleOptions opts;
  opts.mode = TriangleMode::exact;
  EXPECT_DOUBLE_EQ(estimate_triangle_constant(a.space, opts).K, 1.0);
  EXPECT_THROW(uniform_random_space(10001, 2, 0), PreconditionError);
}

TEST(Generate, DispatchesOnFamily) {
  ExampleSpec spec;
  spec.family = ExampleFamily::grid1d;
  spec.n = 7;
  EXPECT_EQ(generate(spec).space.size(), 7u);
  EXPECT_EQ(parse_example_family("weighted_plane"), ExampleFamily::weighted_plane);
  EXPECT_THROW(parse_example_family("carpet"), PreconditionError);
}
