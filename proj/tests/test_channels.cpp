#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "scottshift/channels.hpp"

using namespace scottshift;

TEST(CriticalCoupling, ChandrasekharClosedForms) {
  constexpr double pi = std::numbers::pi;
  EXPECT_NEAR(critical_coupling_c(0) / (2.0 / pi), 1.0, 1e-12);
  EXPECT_NEAR(critical_coupling_c(1) / (pi / 2.0), 1.0, 1e-12);
  EXPECT_NEAR(critical_coupling_c(2) / (8.0 / pi), 1.0, 1e-12);
  EXPECT_NEAR(critical_coupling_c(3) / (9.0 * pi / 8.0), 1.0, 1e-12);
}

TEST(CriticalCoupling, BrownRavenhallAgainstQuadratureOracle) {
  // independent arbitrary-precision quadrature of (Q_lo + Q_lo+1)/2 over cosh u
  EXPECT_NEAR(critical_coupling_b(1), 0.90603670090058041, 1e-12);
  EXPECT_NEAR(critical_coupling_b(3), 1.943032513296571, 1e-12);
  EXPECT_NEAR(critical_coupling_b(5), 2.9601510266938669, 1e-12);
  EXPECT_NEAR(kappa_b(), critical_coupling_b(1), 1e-12);
  EXPECT_NEAR(kappa_c(), critical_coupling_c(0), 1e-12);
}

TEST(CriticalCoupling, HarmonicMeanOfNeighbours) {
  for (int tj = 1; tj <= 21; tj += 2) {
    const int lo = (tj - 1) / 2;
    const double lhs = 1.0 / critical_coupling_b(tj);
    const double rhs = 0.5 * (1.0 / critical_coupling_c(lo) + 1.0 / critical_coupling_c(lo + 1));
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-10) << "2j=" << tj;
  }
}

TEST(CriticalCoupling, IncreasingInAngularMomentum) {
  for (int l = 0; l < 12; ++l) EXPECT_LT(critical_coupling_c(l), critical_coupling_c(l + 1));
  for (int tj = 1; tj < 23; tj += 2) EXPECT_LT(critical_coupling_b(tj), critical_coupling_b(tj + 2));
}

TEST(CriticalCoupling, RejectsBadIndices) {
  EXPECT_THROW(critical_coupling_c(-1), DomainError);
  EXPECT_THROW(critical_coupling_b(2), DomainError);
  EXPECT_THROW(critical_coupling_b(-1), DomainError);
}

TEST(Channels, EnumerationCoversBothOrbitalPartners) {
  const auto ch = enumerate_channels(5);
  ASSERT_EQ(ch.size(), 6u);
  std::set<std::pair<int, int>> seen;
  for (const auto& c : ch) {
    EXPECT_EQ(std::abs(2 * c.l - c.two_j), 1);
    EXPECT_EQ(c.degeneracy(), c.two_j + 1);
    seen.insert({c.two_j, c.l});
  }
  EXPECT_TRUE(seen.count({1, 0}) && seen.count({1, 1}) && seen.count({5, 3}));
  EXPECT_THROW(AngularChannel(1, 2), DomainError);
  EXPECT_THROW(AngularChannel(2, 1), DomainError);
}

TEST(Channels, KindNamesRoundTrip) {
  for (auto k : {OperatorKind::BrownRavenhall, OperatorKind::Chandrasekhar, OperatorKind::Schroedinger,
                 OperatorKind::BrownRavenhallMassless, OperatorKind::ChandrasekharMassless})
    EXPECT_EQ(parse_kind(to_string(k)), k);
  EXPECT_THROW(parse_kind("dirac"), DomainError);
}

TEST(Channels, AdmissibilityIsClosedAtTheCriticalValue) {
  EXPECT_TRUE(admissible_coupling(kappa_b(), kappa_b()));
  EXPECT_TRUE(admissible_coupling(0.906036700900580, kappa_b()));
  EXPECT_FALSE(admissible_coupling(kappa_b() * (1.0 + 1e-12), kappa_b()));
  EXPECT_FALSE(admissible_coupling(0.0, kappa_b()));
  EXPECT_TRUE(std::isinf(channel_critical_coupling(OperatorKind::Schroedinger, AngularChannel(1, 0))));
  EXPECT_DOUBLE_EQ(channel_critical_coupling(OperatorKind::Chandrasekhar, AngularChannel(3, 1)), critical_coupling_c(1));
}
