#include <gtest/gtest.h>

#include <cmath>

#include "scottshift/scott.hpp"

using namespace scottshift;

namespace {

ShiftSource constant_source(double s, double err = 0.0) {
  return [s, err](double) { return ShiftEstimate{s, err}; };
}

}  // namespace

TEST(Scott, NonrelativisticLimit) {
  const double e1 = tf_energy_constant();
  for (double z : {1.0, 26.0, 100.0}) {
    const auto e = scott_energy(z, kInfiniteSpeed, {});
    EXPECT_EQ(e.kappa, 0.0);
    EXPECT_EQ(e.s_used, 0.0);
    EXPECT_EQ(e.scott_term, 0.5 * z * z);
    EXPECT_EQ(e.e_tf, e1 * std::pow(z, 7.0 / 3.0));
    EXPECT_EQ(e.total, e.e_tf + e.scott_term);
  }
}

TEST(Scott, ShiftLowersTheScottTerm) {
  const auto e = scott_energy(50.0, 137.0, constant_source(0.8, 0.01));
  EXPECT_NEAR(e.kappa, 50.0 / 137.0, 1e-15);
  EXPECT_NEAR(e.scott_term, (0.5 - 0.8) * 2500.0, 1e-9);
  EXPECT_EQ(e.s_error, 0.01);
}

TEST(Scott, GateIsExactAtTheCriticalCoupling) {
  const double z = 80.0;
  EXPECT_NO_THROW(scott_energy(z, z / kappa_b(), constant_source(1.0)));
  try {
    scott_energy(z, z / kappa_b() * (1.0 - 1e-9), constant_source(1.0));
    FAIL() << "expected a supercritical error";
  } catch (const SupercriticalError& e) {
    EXPECT_NEAR(e.critical(), kappa_b(), 1e-15);
    EXPECT_NE(std::string(e.what()).find("c must be at least"), std::string::npos);
  }
  // the comparison model stops at 2/pi
  EXPECT_THROW(scott_energy(z, z / 0.7, constant_source(1.0), OperatorKind::Chandrasekhar), SupercriticalError);
  EXPECT_NO_THROW(scott_energy(z, z / 0.6, constant_source(1.0), OperatorKind::Chandrasekhar));
}

TEST(Scott, RejectsBadArguments) {
  EXPECT_THROW(scott_energy(0.0, 137.0, constant_source(0.0)), DomainError);
  EXPECT_THROW(scott_energy(10.0, -1.0, constant_source(0.0)), DomainError);
  EXPECT_THROW(scott_energy(10.0, 137.0, {}), DomainError);
  EXPECT_THROW(scott_energy(10.0, 137.0, constant_source(0.0), OperatorKind::Schroedinger), DomainError);
}

TEST(Interpolant, NodesExactAndNoExtrapolation) {
  std::vector<CurvePoint> pts;
  for (int i = 0; i < 6; ++i) {
    const double k = 0.1 + 0.1 * i;
    pts.push_back({k, true, 0.9 * k * k, 1e-4, {}});
  }
  pts.push_back({0.9, false, 0.0, 0.0, "failed"});
  const auto f = std::make_shared<const ShiftInterpolant>(pts);
  EXPECT_DOUBLE_EQ(f->upper(), 0.6);
  EXPECT_EQ((*f)(pts[2].kappa).s, pts[2].s);
  EXPECT_EQ((*f)(pts[2].kappa).error, 1e-4);
  const auto mid = (*f)(0.35);
  EXPECT_NEAR(mid.s, 0.9 * 0.35 * 0.35, 2e-3);
  EXPECT_GE(mid.error, 1e-4);
  EXPECT_THROW((*f)(0.65), DomainError);
  EXPECT_THROW((*f)(0.05), DomainError);

  const auto src = cached_shift(f, constant_source(7.0));
  EXPECT_EQ(src(0.8).s, 7.0);
  EXPECT_EQ(src(0.2).s, pts[1].s);
}

TEST(Interpolant, FewPointsFallBackToLinear) {
  const std::vector<CurvePoint> pts{{0.1, true, 1.0, 0.0, {}}, {0.3, true, 3.0, 0.0, {}}};
  const ShiftInterpolant f(pts);
  EXPECT_NEAR(f(0.2).s, 2.0, 1e-15);
  EXPECT_THROW(ShiftInterpolant(std::vector<CurvePoint>{}), DomainError);
}

TEST(Table, RowsFollowInputOrder) {
  const auto rows = energy_table({10.0, 1.0, 5.0}, fixed_speed(kInfiniteSpeed), {});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].Z, 10.0);
  EXPECT_EQ(rows[1].Z, 1.0);
  EXPECT_EQ(rows[2].scott_term, 12.5);
}
