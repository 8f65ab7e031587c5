#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "scottshift/shift.hpp"

using namespace scottshift;

namespace {

ShiftOptions small_options() {
  ShiftOptions o;
  o.two_j_max = 5;
  o.n_levels = 6;
  o.grid.nodes = 400;
  return o;
}

}  // namespace

TEST(LevelTail, PowerSumAgainstZeta) {
  constexpr double pi = std::numbers::pi;
  EXPECT_NEAR(detail::power_sum(2.0, 1, INFINITY), pi * pi / 6.0, 1e-12);
  EXPECT_NEAR(detail::power_sum(4.0, 1, INFINITY), std::pow(pi, 4) / 90.0, 1e-13);
  // partial sum with an explicit end
  double s = 0.0;
  for (int n = 3; n <= 5000; ++n) s += std::pow(n, -3.0);
  EXPECT_NEAR(detail::power_sum(3.0, 3, 5000), s, 1e-14);
}

TEST(LevelTail, FitRecoversExactPowerLaw) {
  std::vector<LevelDifference> lv;
  for (int n = 1; n <= 10; ++n) {
    LevelDifference d;
    d.n = n;
    d.delta = 0.7 * std::pow(n + 2, -3.2);
    lv.push_back(d);
  }
  const auto f = detail::fit_power_tail(lv, 2, 5);
  EXPECT_NEAR(f.amplitude, 0.7, 1e-12);
  EXPECT_NEAR(f.exponent, 3.2, 1e-12);
  lv[7].delta = -1.0;
  EXPECT_THROW(detail::fit_power_tail(lv, 2, 5), ConvergenceError);
  EXPECT_THROW(detail::tail_sum({1.0, 0.9}, 3, INFINITY), ConvergenceError);
}

TEST(TotalShift, SmallConfigurationIsConsistent) {
  const auto o = small_options();
  const auto r = total_shift(0.3, o);
  EXPECT_EQ(r.channels.size(), 6u);
  EXPECT_TRUE(std::isfinite(r.s_value));
  EXPECT_GE(r.s_value, -r.error_estimate);
  EXPECT_GT(r.error_estimate, 0.0);
  double sum = r.channel_tail;
  for (const auto& c : r.channels) {
    sum += c.value;
    EXPECT_EQ(c.levels_used, o.n_levels + c.channel.l);
    EXPECT_NEAR(c.value, c.channel.degeneracy() * (c.raw_sum + c.level_tail), 1e-14 * std::abs(c.value) + 1e-300);
  }
  EXPECT_NEAR(r.s_value, sum / 0.09, 1e-12 * std::abs(r.s_value));
}

TEST(TotalShift, ThreadCountDoesNotChangeTheResult) {
  auto o = small_options();
  o.coarse_check = false;
  const auto a = total_shift(0.5, o);
  o.threads = 3;
  const auto b = total_shift(0.5, o);
  EXPECT_EQ(a.s_value, b.s_value);
  EXPECT_EQ(a.channel_tail, b.channel_tail);
}

TEST(TotalShift, SmallCouplingScalesLikeKappaSquaredTimesConstant) {
  auto o = small_options();
  o.coarse_check = false;
  const double s1 = total_shift(0.05, o).s_value / 0.0025;
  const double s2 = total_shift(0.1, o).s_value / 0.01;
  EXPECT_GT(s1, 0.0);
  EXPECT_LT(std::max(s1, s2) / std::min(s1, s2), 2.0);
}

TEST(TotalShift, RejectsBadInput) {
  auto o = small_options();
  EXPECT_THROW(total_shift(0.95, o), SupercriticalError);
  EXPECT_THROW(total_shift(0.0, o), SupercriticalError);
  o.two_j_max = 6;
  EXPECT_THROW(total_shift(0.3, o), DomainError);
  o.two_j_max = 3;
  EXPECT_THROW(total_shift(0.3, o), DomainError);
  auto c = small_options();
  c.relativistic = OperatorKind::Chandrasekhar;
  EXPECT_THROW(total_shift(0.7, c), SupercriticalError);
}

TEST(Curve, PointsAndFailures) {
  const auto k = curve_points(0.1, 0.5, 5);
  ASSERT_EQ(k.size(), 5u);
  EXPECT_DOUBLE_EQ(k[2], 0.3);
  EXPECT_DOUBLE_EQ(k.back(), 0.5);
  EXPECT_THROW(curve_points(0.5, 0.1, 3), DomainError);
  auto o = small_options();
  o.coarse_check = false;
  const auto c = shift_curve({0.2, 1.2}, o);
  EXPECT_TRUE(c[0].ok);
  EXPECT_FALSE(c[1].ok);
  EXPECT_FALSE(c[1].message.empty());
}
