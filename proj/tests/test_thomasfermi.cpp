#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "scottshift/thomasfermi.hpp"

using namespace scottshift;

namespace {

// initial slope of the universal Thomas-Fermi function, literature value
constexpr double kSlope = -1.588071022611375;

const TFSolution& ode() {
  static const TFSolution s = tf_ode_solve();
  return s;
}

const TFSolution& minimized() {
  static const TFSolution s = tf_minimize(make_radial_grid());
  return s;
}

}  // namespace

TEST(ThomasFermi, Constants) {
  EXPECT_NEAR(kGammaTF, 0.5 * std::pow(3.0 * std::numbers::pi * std::numbers::pi, 2.0 / 3.0), 1e-14);
  EXPECT_NEAR(tf_length_scale(), 0.885341377000114, 1e-14);
  EXPECT_NEAR(kSommerfeldExponent, 0.772001872658765, 1e-14);
}

TEST(ThomasFermi, ShootingSlope) {
  const auto p = tf_profile(1e-11);
  EXPECT_NEAR(p.slope, kSlope, 1e-9);
  EXPECT_LT(p.bracket_width, 1e-10);
  // chi -> 144 / x^3 (1 - F x^-lambda) far out
  for (double x : {500.0, 900.0}) {
    const double sommerfeld = 144.0 / (x * x * x) * (1.0 - p.tail_f * std::pow(x, -kSommerfeldExponent));
    EXPECT_NEAR(tf_chi(p, x) / sommerfeld, 1.0, 1e-2) << "x=" << x;
  }
  EXPECT_LT(tf_chi(p, 500.0) * 125e6 / 144.0, tf_chi(p, 900.0) * 729e6 / 144.0);
  EXPECT_THROW(tf_profile(1e-2), DomainError);
}

TEST(ThomasFermi, EnergyFromSlope) {
  EXPECT_NEAR(ode().energy, 3.0 / 7.0 * kSlope / tf_length_scale(), 1e-8);
  EXPECT_NEAR(ode().energy, -0.7687451242, 1e-9);
}

TEST(ThomasFermi, RoutesAgree) {
  EXPECT_NEAR(minimized().energy / ode().energy, 1.0, 2e-3);
  EXPECT_NEAR(minimized().terms.virial_ratio(), 1.0, 1e-3);
  EXPECT_NEAR(minimized().density.total_charge, 1.0, 2e-3);
  for (double r : {0.01, 0.1, 1.0, 10.0})
    EXPECT_NEAR(tf_potential(minimized(), r) / tf_potential(ode(), r), 1.0, 5e-3) << "r=" << r;
}

TEST(ThomasFermi, ScalingWithNuclearCharge) {
  const auto g = make_radial_grid();
  const double e1 = minimized().energy;
  for (double z : {2.0, 10.0}) {
    const auto s = tf_minimize(g, 2000, {}, z);
    EXPECT_NEAR(s.energy / std::pow(z, 7.0 / 3.0) / e1, 1.0, 1e-3) << "Z=" << z;
  }
}

TEST(ThomasFermi, NuclearCuspOfThePotential) {
  for (const auto* s : {&ode(), &minimized()}) {
    EXPECT_NEAR(1e-4 * tf_potential(*s, 1e-4), 1.0, 1e-3);
    EXPECT_NEAR(1e-5 * tf_potential(*s, 1e-5), 1.0, 1e-3);
  }
}

TEST(ThomasFermi, MinimizerPreconditions) {
  EXPECT_THROW(tf_minimize(make_radial_grid(1e-5, 50, 100)), DomainError);
  EXPECT_THROW(make_radial_grid(1.0, 0.5, 400), DomainError);
  EXPECT_THROW(make_density({1.0, 2.0}, {0.1, -0.1}), DomainError);
}

TEST(ExchangeHole, ChargeAndRadius) {
  EXPECT_NEAR(enclosed_charge(ode(), 0.0, 1e6), ode().density.total_charge, 1e-3);
  const auto h = exchange_hole(ode(), 0.0);
  EXPECT_NEAR(enclosed_charge(ode(), 0.0, h.R), 0.5, 1e-9);
  EXPECT_GT(h.L, 0.5 / h.R);  // the charge sits inside the ball
  const auto h1 = exchange_hole(ode(), 1.0);
  EXPECT_GT(h1.R, 0.0);
  EXPECT_NEAR(enclosed_charge(ode(), 1.0, h1.R), 0.5, 1e-9);
}

TEST(ExchangeHole, HartreeMatchesNuclearScreening) {
  // the TF potential is Z / r minus the Hartree potential
  for (double r : {0.05, 0.5, 2.0})
    EXPECT_NEAR(tf_potential(ode(), r), 1.0 / r - hartree_at(ode(), r), 2e-3 / r) << "r=" << r;
}

TEST(Hellmann, CutoffGrowsLikeCubeRoot) {
  for (double z : {10.0, 100.0, 1000.0}) {
    const int k = hellmann_cutoff(ode(), 0.0, z);
    EXPECT_GT(k, 0);
    const double ratio = k / std::cbrt(z);
    EXPECT_GT(ratio, 1.0 / 1.5);
    EXPECT_LT(ratio, 1.5);
    EXPECT_EQ(hellmann_occupation(ode(), k, 0.0, z), 0.0);
    EXPECT_GT(hellmann_occupation(ode(), 0, 0.0, z), 0.0);
  }
  EXPECT_EQ(occupation_factor(4.0, 9.0), 0.0);
  EXPECT_NEAR(occupation_factor(1.0, 4.0), std::pow(0.5, 2.0 / 3.0), 1e-15);
}
