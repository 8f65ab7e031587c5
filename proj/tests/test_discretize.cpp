#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "scottshift/discretize.hpp"
#include "scottshift/spectra.hpp"

using namespace scottshift;

namespace {

GridPtr policy_grid(double kappa, int l, int nodes = 1200, int n_levels = 12) {
  GridPolicy p;
  p.nodes = nodes;
  return std::make_shared<const MomentumGrid>(p.grid_for(kappa, l, n_levels));
}

}  // namespace

TEST(Grid, LogGaussIntegratesPowersExactly) {
  const auto g = build_grid(1e-3, 1e3, 64, GridScheme::LogGauss);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    s1 += g.weights[i];
    s2 += g.weights[i] * g.nodes[i];
  }
  EXPECT_NEAR(s1, 1e3 - 1e-3, 1e-9);
  EXPECT_NEAR(s2 / (0.5 * (1e6 - 1e-6)), 1.0, 1e-12);
}

TEST(Grid, PolicyDefaultsAndOverrides) {
  GridPolicy p;
  const auto g = p.grid_for(0.5, 2, 12);
  EXPECT_NEAR(g.p_min, 0.5 / 24000.0, 1e-18);
  EXPECT_NEAR(g.p_max, 150.0, 1e-12);
  EXPECT_EQ(g.size(), 1200u);
  p.range_scale = 2.0;
  EXPECT_NEAR(p.grid_for(0.5, 2, 12).p_max, 300.0, 1e-12);
  EXPECT_THROW(build_grid(1.0, 0.5, 10, GridScheme::LogGauss), DomainError);
  EXPECT_THROW(build_grid(1.0, 2.0, 1, GridScheme::LogUniform), DomainError);
  EXPECT_EQ(parse_scheme("log-uniform"), GridScheme::LogUniform);
}

TEST(Kernel, SymmetricAndPositive) {
  for (auto kind : {OperatorKind::BrownRavenhall, OperatorKind::Chandrasekhar, OperatorKind::Schroedinger,
                    OperatorKind::BrownRavenhallMassless, OperatorKind::ChandrasekharMassless}) {
    for (const auto& ch : enumerate_channels(5)) {
      const double a = channel_kernel(kind, ch, Momentum(0.3), Momentum(2.7));
      const double b = channel_kernel(kind, ch, Momentum(2.7), Momentum(0.3));
      EXPECT_NEAR(a, b, 1e-15 * std::abs(a));
      EXPECT_GT(a, 0.0);
    }
  }
  EXPECT_THROW(channel_kernel(OperatorKind::Schroedinger, AngularChannel(1, 0), Momentum(1.0), Momentum(1.0)),
               DomainError);
}

TEST(Kernel, SchroedingerKernelIsTheLegendreQ) {
  const double p = 0.4, q = 1.9;
  const double z = (p * p + q * q) / (2 * p * q);
  EXPECT_NEAR(channel_kernel(OperatorKind::Schroedinger, AngularChannel(3, 2), Momentum(p), Momentum(q)),
              legendre_q(2, z) / std::numbers::pi, 1e-15);
}

TEST(Kernel, HalfSpinDecompositionResidual) {
  const auto pairs = random_momentum_pairs(10000, 1e-3, 1e3, 7);
  EXPECT_LT(decomposition_residual(pairs), 1e-12);
}

TEST(Assembly, SchroedingerReproducesBohrLevels) {
  for (double kappa : {0.3, 1.0}) {
    for (int l = 0; l <= 3; ++l) {
      const auto grid = policy_grid(kappa, l);
      const auto s = negative_spectrum(assemble(OperatorKind::Schroedinger, AngularChannel(2 * l + 1, l), kappa, grid));
      ASSERT_GE(s.count(), 6u);
      for (int n = 1; n <= 6; ++n) {
        const double exact = -kappa * kappa / (2.0 * (n + l) * (n + l));
        EXPECT_NEAR(s.eigenvalues[static_cast<std::size_t>(n - 1)] / exact, 1.0, 1e-3)
            << "kappa=" << kappa << " l=" << l << " n=" << n;
      }
    }
  }
}

TEST(Assembly, MatrixIsSymmetric) {
  const auto grid = policy_grid(0.5, 0, 200);
  const auto m = assemble(OperatorKind::BrownRavenhall, AngularChannel(1, 0), 0.5, grid);
  EXPECT_LT((m.entries - m.entries.transpose()).cwiseAbs().maxCoeff(), 1e-14 * m.norm());
  EXPECT_EQ(m.dimension(), 201);  // tail element appended
  EXPECT_TRUE(m.tail.present);
  const auto s = assemble(OperatorKind::Schroedinger, AngularChannel(1, 0), 0.5, grid);
  EXPECT_EQ(s.dimension(), 200);
}

TEST(Assembly, RefusesSupercriticalCoupling) {
  const auto grid = policy_grid(1.0, 0, 64);
  EXPECT_THROW(assemble(OperatorKind::Chandrasekhar, AngularChannel(1, 0), 0.7, grid), SupercriticalError);
  EXPECT_THROW(assemble(OperatorKind::BrownRavenhall, AngularChannel(1, 0), 0.95, grid), SupercriticalError);
  EXPECT_NO_THROW(assemble(OperatorKind::BrownRavenhall, AngularChannel(1, 0), kappa_b(), grid));
  AssemblyOptions o;
  o.allow_supercritical = true;
  EXPECT_NO_THROW(assemble(OperatorKind::ChandrasekharMassless, AngularChannel(1, 0), 0.7, grid, o));
  EXPECT_THROW(assemble(OperatorKind::Schroedinger, AngularChannel(1, 0), -1.0, grid), DomainError);
}

TEST(Assembly, DumpRoundTrip) {
  const auto grid = policy_grid(0.6, 1, 40);
  const auto m = assemble(OperatorKind::BrownRavenhall, AngularChannel(3, 1), 0.6, grid);
  const auto path = (std::filesystem::temp_directory_path() / "scottshift_dump_test.bin").string();
  write_matrix_dump(path, m);
  EXPECT_EQ(std::filesystem::file_size(path), 32u + 8u * m.dimension() * m.dimension());
  const auto [hdr, a] = read_matrix_dump(path);
  EXPECT_EQ(hdr.n, static_cast<std::uint32_t>(m.dimension()));
  EXPECT_EQ(hdr.kind, OperatorKind::BrownRavenhall);
  EXPECT_EQ(hdr.two_j, 3);
  EXPECT_EQ(hdr.l, 1);
  EXPECT_DOUBLE_EQ(hdr.kappa, 0.6);
  EXPECT_EQ((a - m.entries).cwiseAbs().maxCoeff(), 0.0);
  std::filesystem::remove(path);
  EXPECT_THROW(read_matrix_dump(path), Error);
}
