#include <gtest/gtest.h>

#include "scottshift/verify.hpp"

using namespace scottshift;

TEST(Verify, EverySuitePasses) {
  for (const auto& r : run_suite("all")) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
}

TEST(Verify, GroundStateRepresentationOnAllTestFunctions) {
  const auto grid = build_grid(1e-4, 1e4, 400, GridScheme::LogGauss);
  const auto tests = default_test_functions();
  ASSERT_GE(tests.size(), 5u);
  const auto r = gsr_residual(OperatorKind::ChandrasekharMassless, 0, tests, grid);
  EXPECT_LT(r.max_residual, 1e-6);
  EXPECT_EQ(r.samples, tests.size());
}

TEST(Verify, ComparisonFailsWhenTheConstantIsTooLarge) {
  const auto grid = build_grid(1e-4, 1e4, 400, GridScheme::LogGauss);
  EXPECT_TRUE(comparison_margin(grid).passed);
  EXPECT_FALSE(comparison_margin(grid, 1.5).passed);
}

TEST(Verify, TwistingIsDeterministicForAFixedSeed) {
  const auto a = twisting_inequalities(20000, 0.0, 1e3, 11);
  const auto b = twisting_inequalities(20000, 0.0, 1e3, 11);
  EXPECT_EQ(a.max_residual, b.max_residual);
  EXPECT_TRUE(a.passed);
  EXPECT_EQ(a.detail, "0 violations");
}

TEST(Verify, PositivityDetectsSupercriticality) {
  const auto grid = build_grid(1e-4, 1e4, 400, GridScheme::LogGauss);
  const AngularChannel ch(1, 0);
  AssemblyOptions o;
  o.allow_supercritical = true;
  const auto m = assemble(OperatorKind::ChandrasekharMassless, ch, 1.5 * critical_coupling_c(0), grid, o);
  EXPECT_LT(kinetic_relative_min(m), -1e-3);
  const auto c = assemble(OperatorKind::ChandrasekharMassless, ch, critical_coupling_c(0), grid);
  EXPECT_GT(kinetic_relative_min(c), -1e-8);
}

TEST(Verify, UnknownSuite) { EXPECT_THROW(run_suite("nope"), UsageError); }
