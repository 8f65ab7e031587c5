#pragma once

// Thin wrappers around Boost.Math quadrature plus a runtime Gauss-Legendre
// rule for arbitrary node counts.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "scottshift/error.hpp"

namespace scottshift::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod (7/15) on [a, b]; b may be +infinity.
template <class F>
Result gauss_kronrod(F&& f, double a, double b, double rel_tol = 1e-13, unsigned max_depth = 30) {
  Result r;
  double l1 = 0.0;
  r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, rel_tol, &r.error, &l1);
  return r;
}

// Double-exponential rule on a finite interval; resolves integrable endpoint
// singularities (log, algebraic).
template <class F>
Result tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-13) {
  static thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  Result r;
  double l1 = 0.0;
  r.value = rule.integrate(f, a, b, rel_tol, &r.error, &l1);
  return r;
}

// Half-line [a, inf) double-exponential rule.
template <class F>
Result exp_sinh(F&& f, double a, double rel_tol = 1e-13) {
  static thread_local boost::math::quadrature::exp_sinh<double> rule(12);
  Result r;
  double l1 = 0.0;
  auto shifted = [&](double x) { return f(a + x); };
  r.value = rule.integrate(shifted, rel_tol, &r.error, &l1);
  return r;
}

// Throws ConvergenceError when the reported error exceeds abs_tol + rel_tol |I|.
inline void require(const Result& r, double rel_tol, double abs_tol, const std::string& what) {
  if (!(r.error <= abs_tol + rel_tol * std::abs(r.value)) || !std::isfinite(r.value))
  {
    char buf[96];
    std::snprintf(buf, sizeof buf, ": quadrature did not converge (value %.6g, error estimate %.3g)",
                  r.value, r.error);
    throw ConvergenceError(what + buf, r.error);
  }
}

// Gauss-Legendre nodes and weights on [-1, 1], ascending nodes.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (t * p1 - p0) / (t * t - 1.0);
    const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
    x[static_cast<std::size_t>(i)] = -t;
    x[static_cast<std::size_t>(n - 1 - i)] = t;
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
  if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.0;
  return {std::move(x), std::move(w)};
}

}  // namespace scottshift::quad
