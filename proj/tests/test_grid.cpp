#include <gtest/gtest.h>

#include <numeric>

#include <nld/grid.hpp>

using namespace nld;

TEST(Grids, LinearEndpointsAndSpacing) {
  auto const g = linear_grid(0.0, 1.0, 11);
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_NEAR(g[3], 0.3, 1e-15);
  EXPECT_THROW(linear_grid(0.0, 1.0, 1), std::invalid_argument);
}

TEST(Grids, LogEndpointsExactAndRatioConstant) {
  auto const g = log_grid(1e-2, 1e2, 5);
  EXPECT_EQ(g.front(), 1e-2);
  EXPECT_EQ(g.back(), 1e2);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] / g[i - 1], 10.0, 1e-12);
  EXPECT_THROW(log_grid(0.0, 1.0, 5), std::invalid_argument);
  EXPECT_THROW(log_grid(2.0, 1.0, 5), std::invalid_argument);
}

TEST(Grids, ThetaMargin) {
  auto const t = theta_grid(7, 0.1);
  EXPECT_DOUBLE_EQ(t.front(), 0.1);
  EXPECT_DOUBLE_EQ(t.back(), pi - 0.1);
  EXPECT_THROW(theta_grid(7, 0.0), std::invalid_argument);
}

TEST(FieldGrid, RadiusMajorOrderAndMassScaling) {
  FieldGrid g;
  g.n_r = 4;
  g.n_theta = 3;
  auto const pts = g.points(2.0);
  ASSERT_EQ(pts.size(), 12u);
  EXPECT_DOUBLE_EQ(pts[0].r(), pts[2].r());
  EXPECT_LT(pts[2].r(), pts[3].r());
  EXPECT_DOUBLE_EQ(pts[0].r(), 0.5e-2);
  EXPECT_DOUBLE_EQ(pts.back().r(), 50.0);
}

TEST(FieldGrid, DefaultSize) { EXPECT_EQ(FieldGrid{}.points().size(), 20000u); }

TEST(FieldGrid, Validation) {
  FieldGrid g;
  g.n_r = 1;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = FieldGrid{};
  g.r_min = 5.0;
  g.r_max = 1.0;
  EXPECT_THROW(g.points(), std::invalid_argument);
}

TEST(RandomPoints, DeterministicPerSeed) {
  auto const a = random_points(20, 42);
  auto const b = random_points(20, 42);
  auto const c = random_points(20, 43);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].r(), b[i].r());
    EXPECT_EQ(a[i].theta(), b[i].theta());
    differs = differs || a[i].r() != c[i].r();
  }
  EXPECT_TRUE(differs);
}

TEST(RandomPoints, InsideBounds) {
  for (auto const& p : random_points(1000, 3, 0.1, 10.0, 0.05)) {
    EXPECT_GE(p.r(), 0.1);
    EXPECT_LE(p.r(), 10.0);
    EXPECT_GE(p.theta(), 0.05);
    EXPECT_LE(p.theta(), pi - 0.05);
  }
}

TEST(ParallelMap, PreservesOrder) {
  std::vector<int> in(1000);
  std::iota(in.begin(), in.end(), 0);
  auto const out = parallel_map(in, [](int v) { return 2 * v; }, 7);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(out[i], 2 * i);
}

TEST(ParallelMap, EmptyAndSingleThread) {
  EXPECT_TRUE(parallel_map(std::vector<int>{}, [](int v) { return v; }).empty());
  auto const out = parallel_map(std::vector<double>{1.0, 2.0}, [](double v) { return v * v; }, 1);
  EXPECT_EQ(out[1], 4.0);
}

TEST(ParallelMap, RethrowsWorkerException) {
  std::vector<int> in(100);
  std::iota(in.begin(), in.end(), 0);
  EXPECT_THROW(parallel_map(
                   in,
                   [](int v) {
                     if (v == 77) throw std::runtime_error("boom");
                     return v;
                   },
                   4),
               std::runtime_error);
}

TEST(ResidualStats, Quantiles) {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  ResidualStats const s = residual_stats(v, 5);
  EXPECT_EQ(s.count, 100u);
  EXPECT_EQ(s.masked, 5u);
  EXPECT_EQ(s.max, 100.0);
  EXPECT_DOUBLE_EQ(s.mean, 50.5);
  EXPECT_EQ(s.q50, 50.0);
  EXPECT_EQ(s.q90, 90.0);
  EXPECT_EQ(s.q99, 99.0);
}

TEST(ResidualStats, Empty) {
  ResidualStats const s = residual_stats({}, 3);
  EXPECT_EQ(s.count, 0u);
  EXPECT_EQ(s.masked, 3u);
  EXPECT_EQ(s.max, 0.0);
}
