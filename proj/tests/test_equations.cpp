#include <gtest/gtest.h>

#include <nld/equations.hpp>
#include <nld/grid.hpp>

using namespace nld;

namespace {

FieldGrid small_grid() {
  FieldGrid g;
  g.n_r = 25;
  g.n_theta = 20;
  return g;
}

ModuleLaw law_of(Model model) { return module_law_for(model); }

ModelSpec spec_of(Model model) { return model == Model::NJL ? ModelSpec::njl() : ModelSpec::soler(); }

template <class F>
double max_unmasked(Model model, F&& residual) {
  ModelSpec const spec = spec_of(model);
  SingularMask const mask;
  double worst = 0.0;
  for (auto const& pt : small_grid().points()) {
    if (mask.masked(pt, spec)) continue;
    worst = std::max(worst, residual(exact_fields(pt, spec, law_of(model))));
  }
  return worst;
}

ReducedFields shifted_reduced(GridPoint const& pt, ModelSpec const& spec, double shift, double angular = 0.0) {
  return reduced_fields(
      [&](double r, double th) {
        return ZetaSample{std::log(2.0 * spec.m * r) + shift + angular * std::cos(th), 1.0, -angular * std::sin(th)};
      },
      pt, spec);
}

ReducedFields exact_reduced(GridPoint const& pt, ModelSpec const& spec) {
  return reduced_fields([&](double r, double th) { return exact_zeta(r, th, spec.m); }, pt, spec);
}

} // namespace

TEST(Mask, DefaultMargins) {
  SingularMask const mask;
  EXPECT_TRUE(mask.masked(GridPoint(0.5, pi / 2), ModelSpec::njl()));
  EXPECT_FALSE(mask.masked(GridPoint(0.5, 1.0), ModelSpec::njl()));
  EXPECT_TRUE(mask.masked(GridPoint(0.5, 1.0), ModelSpec::soler()));
  EXPECT_FALSE(mask.masked(GridPoint(0.52, 1.0), ModelSpec::soler()));
}

TEST(ResidualVector, NamedAccess) {
  ResidualVector const v = residual_expanded(exact_fields(GridPoint(1.0, 1.0), ModelSpec::njl(), ModuleLaw::Njl),
                                             Model::NJL);
  ASSERT_EQ(v.residuals.size(), 4u);
  EXPECT_GE(v.max(), v["c"]);
  EXPECT_THROW(v["e"], std::out_of_range);
}

TEST(CovectorForm, NjlExactGrid) {
  EXPECT_LE(max_unmasked(Model::NJL, [](PolarFields const& f) { return residual_polar_covector(f, Model::NJL).max(); }),
            1e-8);
}

TEST(CovectorForm, SolerExactGrid) {
  EXPECT_LE(
      max_unmasked(Model::Soler, [](PolarFields const& f) { return residual_polar_covector(f, Model::Soler).max(); }),
      1e-8);
}

TEST(CovectorForm, CrossModelFieldsFail) {
  // N-JL fields in the Soler equations
  EXPECT_GE(max_unmasked(Model::NJL, [](PolarFields const& f) { return residual_polar_covector(f, Model::Soler).max(); }),
            1e-2);
}

TEST(ExpandedForm, NjlExactGrid) {
  EXPECT_LE(max_unmasked(Model::NJL, [](PolarFields const& f) { return residual_expanded(f, Model::NJL).max(); }),
            1e-8);
}

TEST(ExpandedForm, SolerExactGrid) {
  EXPECT_LE(max_unmasked(Model::Soler, [](PolarFields const& f) { return residual_expanded(f, Model::Soler).max(); }),
            1e-8);
}

TEST(ExpandedForm, ReferencePointAllFour) {
  ResidualVector const v =
      residual_expanded(exact_fields(GridPoint(1.0, pi / 3), ModelSpec::njl(), ModuleLaw::Njl), Model::NJL);
  for (char const* n : {"a", "b", "c", "d"}) EXPECT_LE(v[n], 1e-8) << n;
}

TEST(ExpandedForm, EnergyAboveMassFails) {
  ModelSpec spec = ModelSpec::njl();
  spec.E = 1.1;
  double worst = 0.0;
  for (auto const& pt : small_grid().points()) {
    if (SingularMask{}.masked(pt, spec)) continue;
    worst = std::max(worst, residual_expanded(exact_fields(pt, spec, ModuleLaw::Njl), Model::NJL).max());
  }
  EXPECT_GE(worst, 1e-2);
}

TEST(ExpandedForm, AgreesWithProjectedCovector) {
  for (Model model : {Model::NJL, Model::Soler}) {
    for (double l : {0.5, 0.7}) {
      ModelSpec spec = spec_of(model);
      spec.l = l;
      spec.E = 1.2;
      for (auto const& pt : random_points(50, 11)) {
        if (SingularMask{}.masked(pt, spec)) continue;
        PolarFields const f = exact_fields(pt, spec, law_of(model));
        auto const e = expanded_equations(f, model);
        CovectorProjection const pc = project_covector(f, model);
        double const scale = 1.0 + std::abs(e[0]) + std::abs(e[1]) + std::abs(e[2]) + std::abs(e[3]);
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(e[i], pc.expanded_basis[i], 1e-10 * scale);
        for (double t : pc.transverse) EXPECT_NEAR(t, 0.0, 1e-10 * scale);
      }
    }
  }
}

TEST(ExpandedForm, LinearLimitIdenticalAcrossModels) {
  for (auto const& pt : random_points(50, 12)) {
    if (SingularMask{}.masked(pt, ModelSpec::njl())) continue;
    PolarFields f = exact_fields(pt, ModelSpec::njl(), ModuleLaw::Njl);
    f.phi2 = 0.0;
    auto const a = expanded_equations(f, Model::NJL);
    auto const b = expanded_equations(f, Model::Soler);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(a[i], b[i], 1e-12 * (1.0 + std::abs(a[i])));
    ResidualVector const ca = residual_polar_covector(f, Model::NJL);
    ResidualVector const cb = residual_polar_covector(f, Model::Soler);
    EXPECT_NEAR(ca.max(), cb.max(), 1e-12 * (1.0 + ca.max()));
  }
}

TEST(StandardForm, SpinSignCalibration) {
  SpinSignCalibration const cal = calibrate_spin_connection_sign();
  EXPECT_EQ(cal.sign, kSpinConnectionSign);
  EXPECT_LE(cal.residual_plus, 1e-8);
  EXPECT_GE(cal.residual_minus, 1e-2);
}

TEST(StandardForm, ReferencePointAllModels) {
  GridPoint const pt(1.0, pi / 3);
  EXPECT_LE(residual_standard(exact_fields(pt, ModelSpec::njl(), ModuleLaw::Njl), 1.0), 1e-8);
  EXPECT_LE(residual_standard(exact_fields(pt, ModelSpec::soler(), ModuleLaw::Soler), 0.0), 1e-8);
  EXPECT_LE(residual_standard(exact_fields(pt, ModelSpec::interpolating(0.5), ModuleLaw::Interpolating), 0.5), 1e-8);
}

TEST(StandardForm, FiniteDifferencePathAgrees) {
  GridPoint const pt(1.0, pi / 3);
  for (double p : {0.0, 0.5, 1.0}) {
    ModuleLaw const law = p == 1.0 ? ModuleLaw::Njl : p == 0.0 ? ModuleLaw::Soler : ModuleLaw::Interpolating;
    EXPECT_LE(residual_standard_fd(ClosedFormProfile{1.0}, pt, ModelSpec::interpolating(p), law, p), 1e-8) << p;
  }
}

TEST(StandardForm, WrongNonlinearityFails) {
  PolarFields const f = exact_fields(GridPoint(1.0, pi / 3), ModelSpec::njl(), ModuleLaw::Njl);
  EXPECT_GE(residual_standard(f, 0.0), 1e-2);
}

TEST(StandardForm, PhaseCoordinatesDoNotMatter) {
  PolarFields const f = exact_fields(GridPoint(2.0, 0.8), ModelSpec::njl(), ModuleLaw::Njl);
  EXPECT_LE(residual_standard(f, 1.0, kSpinConnectionSign, {3.7, 1.9}), 1e-8);
}

TEST(ReducedForm, RandomPointsAllP) {
  for (double p : {0.0, 0.5, 1.0}) {
    ModelSpec const spec = ModelSpec::interpolating(p);
    double worst = 0.0;
    int used = 0;
    for (auto const& pt : random_points(300, 13)) {
      if (SingularMask{}.masked(pt, spec) || used == 200) continue;
      ++used;
      worst = std::max(worst, residual_reduced(exact_reduced(pt, spec), p).max());
    }
    EXPECT_EQ(used, 200);
    EXPECT_LE(worst, 1e-8) << p;
  }
}

TEST(ReducedForm, MatchesPolarFieldsPath) {
  for (auto const& pt : random_points(30, 14)) {
    if (SingularMask{}.masked(pt, ModelSpec::njl())) continue;
    ReducedFields const a = reduced_fields(exact_fields(pt, ModelSpec::njl(), ModuleLaw::Njl));
    ReducedFields const b = exact_reduced(pt, ModelSpec::njl());
    EXPECT_NEAR(a.phi2, b.phi2, 1e-12 * b.phi2);
    EXPECT_NEAR(a.r_dr_ln_phi2, b.r_dr_ln_phi2, 1e-10);
    EXPECT_NEAR(a.dtheta_ln_phi2, b.dtheta_ln_phi2, 1e-10);
  }
}

TEST(ReducedForm, ShiftedZetaDetected) {
  ReducedFields const f = shifted_reduced(GridPoint(1.0, pi / 3), ModelSpec::njl(), 1e-3);
  EXPECT_GE(residual_reduced(f, 1.0)["zeta_radial"], 1e-4);
}

TEST(ReducedForm, AngularZetaBreaksConsistency) {
  ReducedFields const f = shifted_reduced(GridPoint(1.0, pi / 3), ModelSpec::njl(), 0.0, 0.01);
  EXPECT_GE(residual_reduced(f, 1.0)["consistency"], 1e-3);
}

TEST(ChainOfForms, ExactSolutionsPassEverywhere) {
  for (double p : {0.0, 0.5, 1.0}) {
    ModelSpec const spec = ModelSpec::interpolating(p);
    for (auto const& pt : random_points(40, 15)) {
      if (SingularMask{}.masked(pt, spec)) continue;
      PolarFields const f = exact_fields(pt, spec, ModuleLaw::Interpolating);
      EXPECT_LE(residual_standard(f, p), 1e-8);
      EXPECT_LE(residual_reduced(reduced_fields(f), p).max(), 1e-8);
    }
  }
}

TEST(ChainOfForms, PerturbationsSeenAtComparableSize) {
  GridPoint const pt(1.0, pi / 3);
  for (double p : {0.0, 0.5, 1.0}) {
    ModelSpec const spec = ModelSpec::interpolating(p);
    for (double shift : {1e-3, 1e-2}) {
      PolarFields const f = polar_fields(ClosedFormProfile{1.0, shift}, pt, spec, ModuleLaw::Interpolating);
      double const standard = residual_standard(f, p);
      double const reduced = residual_reduced(reduced_fields(f), p).max();
      EXPECT_GT(standard, 1e-8);
      EXPECT_GT(reduced, 1e-8);
      EXPECT_LE(standard / reduced, 10.0) << p << " " << shift;
      EXPECT_LE(reduced / standard, 10.0) << p << " " << shift;
    }
  }
}
