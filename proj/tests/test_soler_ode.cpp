#include <gtest/gtest.h>

#include <sstream>

#include <nld/grid.hpp>
#include <nld/quantum_scan.hpp>
#include <nld/soler_ode.hpp>

using namespace nld;

namespace {

ModelSpec const kSoler = ModelSpec::soler();

double fixed_step_error(double h) {
  IntegratorConfig cfg;
  cfg.fixed_step = h;
  return tracking_report(integrate(cfg, exact_state(1.0, kSoler), kSoler, 10.0)).max_deviation();
}

} // namespace

TEST(SolerRhs, ExactStateGivesAnalyticDerivatives) {
  for (double m : {1.0, 2.0}) {
    ModelSpec const spec = ModelSpec::soler(m);
    double const r = 1.0 / m;
    SolerDerivative const d = soler_rhs(exact_state(r, spec), spec);
    double const X = X_exact(r, spec);
    double const dG = -2.0 / (r * r * X * X) - 4.0 * dX_exact(r, spec) / (r * X * X * X);
    EXPECT_NEAR(d.dX, dX_exact(r, spec), 1e-10 * std::abs(d.dX));
    EXPECT_NEAR(d.dG, dG, 1e-10 * std::abs(dG));
  }
}

TEST(SolerRhs, FixedPointOnLogSpacedRadii) {
  for (double r : log_grid(1e-2, 1e2, 100)) {
    if (std::abs(2.0 * r - 1.0) < 1e-3) continue;
    OdeState const s = exact_state(r, kSoler);
    SolerDerivative const d = soler_rhs(s, kSoler);
    double const dG = s.G * (-1.0 / r - 2.0 * dX_exact(r, kSoler) / s.X);
    EXPECT_NEAR(d.dX, dX_exact(r, kSoler), 1e-10 * std::abs(d.dX)) << r;
    EXPECT_NEAR(d.dG, dG, 1e-10 * std::abs(dG)) << r;
  }
}

TEST(SolerRhs, ZeroCompanionIsInvariant) {
  for (double X : {-3.0, 0.0, 0.75, 10.0}) EXPECT_EQ(soler_rhs({1.3, X, 0.0}, kSoler).dG, 0.0);
}

TEST(SolerRhs, DirectSubstitution) {
  SolerDerivative const d = soler_rhs({1.0, 0.0, 1.0}, kSoler);
  EXPECT_EQ(d.dX, 0.0);
}

TEST(SolerRhs, OverflowGuard) {
  EXPECT_THROW(soler_rhs({1.0, 2e12, 1.0}, kSoler), DivergingState);
  EXPECT_THROW(soler_rhs({1.0, 1.0, -2e12}, kSoler), DivergingState);
  EXPECT_THROW(soler_rhs({0.0, 1.0, 1.0}, kSoler), std::invalid_argument);
}

TEST(Integrate, TracksClosedFormOutward) {
  SolerTrajectory const t = integrate(IntegratorConfig{}, exact_state(1.0, kSoler), kSoler, 10.0);
  EXPECT_DOUBLE_EQ(t.r_end(), 10.0);
  EXPECT_LE(tracking_report(t).max_deviation(), 1e-6);
  EXPECT_FALSE(t.stiffness_warning);
  EXPECT_GT(t.stats.accepted, 10);
}

TEST(Integrate, TracksClosedFormInwardOnOuterSegment) {
  SolerTrajectory const t = integrate(IntegratorConfig{}, exact_state(1.0, kSoler), kSoler, 0.6);
  EXPECT_DOUBLE_EQ(t.r_end(), 0.6);
  EXPECT_LE(tracking_report(t).max_deviation(), 1e-6);
}

TEST(Integrate, TracksClosedFormInwardOnInnerSegment) {
  SolerTrajectory const t = integrate(IntegratorConfig{}, exact_state(0.45, kSoler), kSoler, 0.3);
  EXPECT_LE(tracking_report(t).max_deviation(), 1e-6);
}

TEST(Integrate, SpanAcrossSingularRadiusRejected) {
  try {
    integrate(IntegratorConfig{}, exact_state(1.0, kSoler), kSoler, 0.3);
    FAIL() << "expected SpanCrossesSingularRadius";
  } catch (SpanCrossesSingularRadius const& e) {
    EXPECT_NE(std::string(e.what()).find("split rule"), std::string::npos);
  }
}

TEST(Integrate, InvalidConfigRejected) {
  IntegratorConfig cfg;
  cfg.rtol = 0.0;
  EXPECT_THROW(integrate(cfg, exact_state(1.0, kSoler), kSoler, 2.0), std::invalid_argument);
  EXPECT_THROW(integrate(IntegratorConfig{}, exact_state(1.0, kSoler), kSoler, 1.0), std::invalid_argument);
}

TEST(Integrate, DenseOutputBetweenNodes) {
  SolerTrajectory const t = integrate(IntegratorConfig{}, exact_state(1.0, kSoler), kSoler, 10.0);
  for (double x : {1.01, 2.345, 7.77, 9.99}) {
    OdeState const s = t.state_at(x);
    EXPECT_NEAR(s.X, X_exact(x, kSoler), 1e-6 * std::abs(X_exact(x, kSoler)));
    EXPECT_NEAR(s.G, G_exact(x, kSoler), 1e-6 * G_exact(x, kSoler));
  }
  EXPECT_THROW(t.state_at(11.0), std::out_of_range);
}

TEST(Integrate, PerturbedStartDeparts) {
  OdeState s = exact_state(1.0, kSoler);
  s.X += 1e-3;
  std::vector<double> const dep = departure_profile(integrate(IntegratorConfig{}, s, kSoler, 10.0));
  ASSERT_GE(dep.size(), 2u);
  EXPECT_NEAR(dep.front(), 1e-3, 1e-12);
  EXPECT_GT(dep.back(), 10.0 * dep.front());
}

TEST(Integrate, TighterToleranceTracksBetter) {
  IntegratorConfig loose;
  loose.rtol = 1e-6;
  loose.atol = 1e-9;
  double const a = tracking_report(integrate(loose, exact_state(1.0, kSoler), kSoler, 10.0)).max_deviation();
  double const b = tracking_report(integrate(IntegratorConfig{}, exact_state(1.0, kSoler), kSoler, 10.0)).max_deviation();
  EXPECT_LT(b, a);
}

TEST(Integrate, FixedStepConvergenceOrder) {
  double const e1 = fixed_step_error(0.2);
  double const e2 = fixed_step_error(0.1);
  double const e3 = fixed_step_error(0.05);
  EXPECT_GE(std::log2(e1 / e2), 3.5);
  EXPECT_GE(std::log2(e2 / e3), 3.5);
}

TEST(Integrate, CsvExport) {
  SolerTrajectory const t = integrate(IntegratorConfig{}, exact_state(1.0, kSoler), kSoler, 2.0);
  std::ostringstream os;
  write_trajectory_csv(os, t);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "r,X,G,X_exact,G_exact,dev_X,dev_G");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, t.r.size());
}

TEST(Integrate, TrajectoryIsARadialProfile) {
  SolerTrajectory const t = integrate(IntegratorConfig{}, exact_state(1.0, kSoler), kSoler, 5.0);
  RadialSample const s = t.at(2.0);
  EXPECT_NEAR(s.X, X_exact(2.0, kSoler), 1e-7);
  EXPECT_NEAR(s.dX, dX_exact(2.0, kSoler), 1e-6);
  EXPECT_NEAR(s.G, G_exact(2.0, kSoler), 1e-7);
}

TEST(QuantumScan, GroundStateSatisfiesAll) {
  for (double r : {0.3, 0.7, 1.3, 5.0})
    for (double th : {pi / 6, pi / 3, 2 * pi / 5}) {
      GenericElEquations const e = generic_el_equations(r, th, 1.0, 0.5, 1.0);
      EXPECT_LE(e.max_generic(), 1e-10);
      EXPECT_LE(e.max_reduced(), 1e-10);
      EXPECT_LE(std::abs(e.separation), 1e-10);
    }
}

TEST(QuantumScan, WrongAngularMomentumSeparationResidual) {
  GenericElEquations const e = generic_el_equations(1.0, pi / 3, 1.0, 0.6, 1.0);
  EXPECT_GE(std::abs(e.separation), 1e-2);
}

TEST(QuantumScan, WrongEnergyThirdEquation) {
  double const r = 1.0;
  double const E = 1.2;
  double const X = X_trial(r, E);
  double const direct = 1.0 - 2.0 * r * std::sqrt(X * X + 1.0) + 2.0 * E * r * X;
  EXPECT_GT(std::abs(direct), 1e-3);
  GenericElEquations const e = generic_el_equations(r, pi / 3, E, 0.5, 1.0);
  EXPECT_NEAR(e.reduced_third, direct, 1e-14);
  EXPECT_GT(std::abs(e.reduced_third), 1e-3);
}

TEST(QuantumScan, TrialProfileMatchesExactAtRestEnergy) {
  for (double r : {0.2, 1.0, 4.0}) EXPECT_DOUBLE_EQ(X_trial(r, 1.0), X_exact(r, kSoler));
}

TEST(QuantumScan, UniqueZeroCell) {
  ScanSurface const s = quantum_number_scan(1.0);
  ASSERT_EQ(s.cells.size(), 121u);
  auto const zeros = s.zero_cells(1e-10);
  ASSERT_EQ(zeros.size(), 1u);
  EXPECT_NEAR(zeros[0].E, 1.0, 1e-12);
  EXPECT_NEAR(zeros[0].l, 0.5, 1e-12);
  EXPECT_EQ(&s(5, 5), &s.cells[5 * 11 + 5]);
}

TEST(QuantumScan, ScalesWithMass) {
  auto const zeros = quantum_number_scan(2.5).zero_cells(1e-10);
  ASSERT_EQ(zeros.size(), 1u);
  EXPECT_NEAR(zeros[0].E, 1.0, 1e-12); // cells are in units of m
}

TEST(QuantumScan, NeighbouringCellsClearlyNonZero) {
  ScanSurface const s = quantum_number_scan(1.0);
  for (auto [i, j] : {std::pair{4, 5}, {6, 5}, {5, 4}, {5, 6}, {4, 4}, {6, 6}, {4, 6}, {6, 4}})
    EXPECT_GE(s(i, j).residual, 1e-3) << i << "," << j;
}
