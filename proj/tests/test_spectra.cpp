#include <gtest/gtest.h>

#include <cmath>

#include "scottshift/spectra.hpp"

using namespace scottshift;

TEST(DiracLevels, GroundStateClosedForm) {
  for (double k : {0.1, 0.5, 0.9}) EXPECT_NEAR(dirac_level(1, 1, k), std::sqrt(1.0 - k * k), 1e-15);
}

TEST(DiracLevels, NonrelativisticLimit) {
  // E - 1 -> -k^2 / (2 N^2) with N = n - 1 + j + 1/2
  const double k = 1e-4;
  for (int n = 1; n <= 4; ++n)
    for (int tj = 1; tj <= 5; tj += 2) {
      const double N = n - 1 + 0.5 * (tj + 1);
      EXPECT_NEAR((dirac_level(n, tj, k) - 1.0) / (-k * k / (2 * N * N)), 1.0, 1e-6);
    }
}

TEST(DiracLevels, BelowBohrLevelsInBothOrbitalPartners) {
  for (double k : {0.3, 0.6, 0.9}) {
    for (int tj = 1; tj <= 5; tj += 2) {
      for (int l : {(tj - 1) / 2, (tj + 1) / 2}) {
        const AngularChannel ch(tj, l);
        for (int n = 1; n <= 6; ++n) EXPECT_LE(dirac_channel_level(n, ch, k) - 1.0, schroedinger_level(n, l, k) + 1e-12);
      }
    }
  }
  // l = j + 1/2 skips the nodeless state: (1/2, 1) starts at the 2p_1/2 level
  EXPECT_DOUBLE_EQ(dirac_channel_level(1, AngularChannel(1, 1), 0.4), dirac_level(2, 1, 0.4));
  EXPECT_THROW(dirac_level(1, 1, 1.0), DomainError);
  EXPECT_THROW(dirac_level(0, 1, 0.5), DomainError);
}

TEST(NegativeSpectrum, FloorAndOrdering) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
  a.diagonal() << 1.0, -2.0, -1e-13, -0.5;
  const auto ev = negative_eigenvalues(a, 1e-12);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_DOUBLE_EQ(ev[0], -2.0);
  EXPECT_DOUBLE_EQ(ev[1], -0.5);
  EXPECT_THROW(negative_eigenvalues(Eigen::MatrixXd(2, 3), 0.0), DomainError);
}

TEST(Sandwich, BrownRavenhallBelowDiracBelowBohr) {
  for (double k : {0.3, 0.6}) {
    for (const auto& ch : enumerate_channels(3)) {
      GridPolicy p;
      const auto grid = std::make_shared<const MomentumGrid>(p.grid_for(k, ch.l, 6));
      const auto rep = sandwich_report(OperatorKind::BrownRavenhall, ch, k, grid, 6);
      EXPECT_TRUE(rep.passed()) << label(ch) << " kappa " << k;
      EXPECT_TRUE(std::isfinite(rep.c_hat));
      EXPECT_GT(rep.c_hat, 0.0);
    }
  }
}

TEST(Sandwich, ChandrasekharBelowBohr) {
  GridPolicy p;
  const AngularChannel ch(1, 0);
  const auto grid = std::make_shared<const MomentumGrid>(p.grid_for(0.5, 0, 6));
  const auto rep = sandwich_report(OperatorKind::Chandrasekhar, ch, 0.5, grid, 6);
  EXPECT_TRUE(rep.passed());
  // Chandrasekhar binds more strongly than Brown-Ravenhall
  const auto br = negative_spectrum(assemble(OperatorKind::BrownRavenhall, ch, 0.5, grid));
  EXPECT_LT(rep.rows[0].lambda, br.eigenvalues[0]);
}
