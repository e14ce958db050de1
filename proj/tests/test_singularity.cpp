#include <gtest/gtest.h>

#include <nld/grid.hpp>
#include <nld/singularity.hpp>

using namespace nld;

TEST(AnalyticLocus, NjlRing) {
  SingularLocus const s = singular_locus(ModelSpec::njl(2.0));
  EXPECT_EQ(s.kind, LocusKind::Ring);
  EXPECT_DOUBLE_EQ(s.radius, 0.25);
  ASSERT_TRUE(s.theta.has_value());
  EXPECT_DOUBLE_EQ(*s.theta, pi / 2);
}

TEST(AnalyticLocus, SolerShell) {
  SingularLocus const s = singular_locus(ModelSpec::soler());
  EXPECT_EQ(s.kind, LocusKind::Shell);
  EXPECT_DOUBLE_EQ(s.radius, 0.5);
  EXPECT_FALSE(s.theta.has_value());
}

TEST(AnalyticLocus, AnyPositivePGivesRing) {
  for (double p : {1e-6, 0.3, 0.9}) EXPECT_EQ(singular_locus(ModelSpec::interpolating(p)).kind, LocusKind::Ring);
}

TEST(AnalyticLocus, SameRadiusBothModels) {
  for (double m : {0.5, 1.0, 4.0})
    EXPECT_DOUBLE_EQ(singular_locus(ModelSpec::njl(m)).radius, singular_locus(ModelSpec::soler(m)).radius);
}

TEST(AnalyticLocus, Names) {
  EXPECT_STREQ(to_string(LocusKind::Ring), "ring");
  EXPECT_STREQ(to_string(LocusKind::Shell), "shell");
  EXPECT_STREQ(to_string(LocusKind::None), "none");
}

TEST(NumericalLocus, NjlRingOnDefaultGrid) {
  LocusEstimate const e = locate_numerically(ModelSpec::njl());
  EXPECT_EQ(e.kind, LocusKind::Ring);
  EXPECT_LT(std::abs(2.0 * e.radius - 1.0), 0.01);
  EXPECT_LT(std::abs(e.theta - pi / 2), 0.02);
  EXPECT_TRUE(e.divergent);
  EXPECT_LE(e.r_cell, 1e-3 / 2.0 + 1e-15);
  EXPECT_LE(std::abs(e.radius - 0.5), e.r_cell);
}

TEST(NumericalLocus, SolerShellCoversAngles) {
  LocusEstimate const e = locate_numerically(ModelSpec::soler());
  EXPECT_EQ(e.kind, LocusKind::Shell);
  EXPECT_LT(std::abs(2.0 * e.radius - 1.0), 0.01);
  EXPECT_GE(e.shell_fraction, 0.9);
  EXPECT_TRUE(e.divergent);
}

TEST(NumericalLocus, InterpolatingModelIsRing) {
  for (double p : {0.1, 0.3, 0.5}) {
    LocusEstimate const e = locate_numerically(ModelSpec::interpolating(p));
    EXPECT_EQ(e.kind, LocusKind::Ring) << p;
    EXPECT_TRUE(e.divergent) << p;
    EXPECT_LT(std::abs(2.0 * e.radius - 1.0), 0.01) << p;
  }
}

TEST(NumericalLocus, OtherMass) {
  LocusEstimate const e = locate_numerically(ModelSpec::njl(2.0));
  EXPECT_EQ(e.kind, LocusKind::Ring);
  EXPECT_LT(std::abs(4.0 * e.radius - 1.0), 0.01);
}

TEST(NumericalLocus, ExcludedBandIsBounded) {
  LocusGrid g;
  g.exclude_lo = 0.4;
  g.exclude_hi = 0.6;
  LocusEstimate const e = locate_numerically(ModelSpec::njl(), g);
  EXPECT_FALSE(e.divergent);
  EXPECT_EQ(e.kind, LocusKind::None);
  EXPECT_TRUE(std::isfinite(e.peak_phi2));
  EXPECT_LT(e.peak_phi2, 8e6);
}

TEST(NumericalLocus, GridAwayFromLocusIsBounded) {
  LocusGrid g;
  g.r_min = 1.0;
  g.r_max = 3.0;
  LocusEstimate const e = locate_numerically(ModelSpec::soler(), g);
  EXPECT_FALSE(e.divergent);
  EXPECT_EQ(e.kind, LocusKind::None);
}

TEST(Densities, NjlAxisFiniteForAllRadii) {
  for (double r : log_grid(1e-4, 1e4, 400)) {
    double const v = module_njl(GridPoint(r, 0.0), ModelSpec::njl());
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 0.0);
  }
}

TEST(Densities, SolerDivergesUniformlyInTheta) {
  for (double th : linear_grid(1e-3, pi - 1e-3, 50)) {
    double const v = module_soler(GridPoint(0.5 * (1.0 + 1e-5), th), ModelSpec::soler());
    EXPECT_GT(v, 1e9) << th;
  }
}

TEST(Densities, NjlDivergenceConfinedToEquator) {
  double const off = module_njl(GridPoint(0.5 * (1.0 + 1e-5), pi / 2 - 0.2), ModelSpec::njl());
  double const on = module_njl(GridPoint(0.5 * (1.0 + 1e-5), pi / 2), ModelSpec::njl());
  EXPECT_LT(off, 100.0);
  EXPECT_GT(on, 1e4);
}

TEST(Asymptotics, NjlLimitAtHundred) {
  for (double m : {1.0, 3.0}) {
    double const r = 100.0 / m;
    for (double th : {pi / 4, pi / 2})
      EXPECT_NEAR(module_njl(GridPoint(r, th), ModelSpec::njl(m)) * r * r, 2.0 / m, 1e-4 * 2.0 / m);
  }
}

TEST(Asymptotics, SolerLimitAtHundred) {
  for (double th : {pi / 4, pi / 2})
    EXPECT_NEAR(module_soler(GridPoint(100.0, th), ModelSpec::soler()) * 1e4, 2.0, 2e-4);
}

TEST(Asymptotics, ReportBothModels) {
  for (ModelSpec const& spec : {ModelSpec::njl(), ModelSpec::soler(), ModelSpec::interpolating(0.5)}) {
    AsymptoticsReport const a = asymptotics_report(spec);
    ASSERT_EQ(a.table.size(), 6u);
    EXPECT_NEAR(a.exponent, -2.0, 0.01);
    EXPECT_NEAR(a.limit_constant, 2.0, 1e-5);
    EXPECT_NEAR(a.origin_phi2, 8.0, 1e-6);
  }
}

TEST(Asymptotics, ErrorShrinksAtLeastAsInverseSquare) {
  AsymptoticsReport const a = asymptotics_report(ModelSpec::njl());
  // rows: r = 10, 100, 1000 at pi/4 and pi/2
  for (int k = 0; k < 2; ++k) {
    double const e10 = std::abs(a.table[k].phi2_r2 - 2.0);
    double const e100 = std::abs(a.table[2 + k].phi2_r2 - 2.0);
    EXPECT_GE(e10 / e100, 95.0);
  }
}

TEST(Asymptotics, SlopeFitExactPowerLaw) {
  std::vector<double> x, y;
  for (double v : log_grid(1.0, 1e3, 20)) {
    x.push_back(v);
    y.push_back(3.0 * std::pow(v, -2.5));
  }
  EXPECT_NEAR(fit_loglog_slope(x, y), -2.5, 1e-12);
}
