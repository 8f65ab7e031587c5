#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "scottshift/special.hpp"

using namespace scottshift;

namespace {

struct QRef {
  int l;
  double z;
  double value;
};

// 30-digit reference values of Q_l(z) (arbitrary-precision hypergeometric form)
const std::vector<QRef> kQ = {
    {0, 1.001, 3.8007011672918667},     {0, 1.5, 0.80471895621705019},   {0, 3, 0.34657359027997265},
    {0, 50, 0.020002667306849581},      {1, 1.001, 2.8045018684591586},  {1, 1.5, 0.20707843432557528},
    {1, 3, 0.039720770839917964},       {1, 50, 0.00013336534247903585}, {2, 1.001, 2.3106089718454932},
    {2, 1.5, 0.063566999124019288},     {2, 3, 0.0054566736396445112},   {2, 50, 1.0670325028985309e-6},
    {5, 1.001, 1.5552869979700834},     {5, 1.5, 0.0024668237065027458}, {5, 3, 1.9107860644541267e-5},
    {5, 50, 7.392943573398695e-13},     {10, 1.001, 0.97645087887748243}, {10, 1.5, 1.4714232718207477e-5},
    {10, 3, 2.0794549139134656e-9},     {10, 50, 5.4114124245971102e-23},
};

}  // namespace

TEST(Legendre, MatchesHighPrecisionTable) {
  for (const auto& r : kQ) EXPECT_NEAR(legendre_q(r.l, r.z) / r.value, 1.0, 1e-12) << "l=" << r.l << " z=" << r.z;
}

TEST(Legendre, LowOrderClosedForms) {
  for (double z : {1.0 + 1e-9, 1.01, 2.0, 7.5, 1e3}) {
    const double q0 = 0.5 * std::log((z + 1.0) / (z - 1.0));
    EXPECT_NEAR(legendre_q(0, z), q0, 1e-13 * q0);
    if (z < 100) {
      EXPECT_NEAR(legendre_q(1, z), z * q0 - 1.0, 1e-11 * std::abs(z * q0 - 1.0));
    }
  }
}

TEST(Legendre, NearOneUsesZMinusOneWithoutCancellation) {
  const double zm1 = 1e-13;
  EXPECT_NEAR(detail::legendre_q_zm1(0, zm1), 0.5 * std::log((2.0 + zm1) / zm1), 1e-14);
  // Q_l(z) - Q_0(z) stays bounded as z -> 1 (it tends to minus the harmonic number)
  double h = 0.0;
  for (int l = 1; l <= 6; ++l) {
    h += 1.0 / l;
    EXPECT_NEAR(detail::legendre_q_zm1(l, 1e-12) - detail::legendre_q_zm1(0, 1e-12), -h, 1e-9);
  }
}

TEST(Legendre, SequenceSatisfiesThreeTermRecurrence) {
  for (double zm1 : {1e-6, 0.3, 2.0}) {
    std::vector<double> q(16);
    detail::legendre_q_sequence(15, zm1, q);
    const double z = 1.0 + zm1;
    for (int l = 1; l < 15; ++l) {
      const double lhs = (l + 1) * q[l + 1];
      const double rhs = (2 * l + 1) * z * q[l] - l * q[l - 1];
      EXPECT_NEAR(lhs, rhs, 1e-11 * std::abs(q[l - 1]) * l) << "l=" << l << " zm1=" << zm1;
    }
  }
}

TEST(Legendre, LogRatioArgumentKeepsPrecision) {
  const double du = 1e-9;
  EXPECT_NEAR(detail::zm1_from_log_ratio(du) / (0.5 * du * du), 1.0, 1e-12);
  EXPECT_NEAR(detail::zm1_from_log_ratio(1.0), std::cosh(1.0) - 1.0, 1e-15);
}

TEST(Legendre, RejectsBadArguments) {
  EXPECT_THROW(legendre_q(-1, 2.0), DomainError);
  EXPECT_THROW(legendre_q(0, 1.0), DomainError);
  EXPECT_THROW(legendre_q(0, 0.5), DomainError);
  EXPECT_THROW(legendre_q(0, std::nan("")), DomainError);
}

TEST(Twisting, PartitionOfUnity) {
  for (double p : {0.0, 1e-8, 0.3, 1.0, 40.0, 1e6}) {
    const double a = phi0(p), b = phi1(p);
    EXPECT_NEAR(a * a + b * b, 1.0, 1e-15);
    const double e = std::hypot(p, 1.0);
    EXPECT_NEAR(a * a, (e + 1.0) / (2.0 * e), 1e-15);
  }
  EXPECT_DOUBLE_EQ(phi1(0.0), 0.0);
  // small-p expansion phi_1 ~ p / 2
  EXPECT_NEAR(phi1(1e-7) / 0.5e-7, 1.0, 1e-12);
  EXPECT_NEAR(phi0(1e8), std::sqrt(0.5), 1e-8);
}

TEST(Twisting, IndexedAccess) {
  EXPECT_DOUBLE_EQ(phi(0, Momentum(2.0)), phi0(2.0));
  EXPECT_DOUBLE_EQ(phi(1, Momentum(2.0)), phi1(2.0));
  EXPECT_THROW(phi(2, Momentum(1.0)), DomainError);
  EXPECT_THROW(static_cast<void>(Momentum(-1.0)), DomainError);
  EXPECT_THROW(static_cast<void>(Momentum(INFINITY)), DomainError);
  EXPECT_DOUBLE_EQ(energy_dispersion(Momentum(0.75)), 1.25);
}
