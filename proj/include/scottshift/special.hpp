#pragma once

// Scalar special functions: the relativistic dispersion E(p), the twisting
// factors phi_0/phi_1 and Legendre functions of the second kind Q_l on z > 1.

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "scottshift/error.hpp"

namespace scottshift {

// Radial momentum in units where hbar = m = c = 1.
struct Momentum {
  double value = 0.0;

  constexpr Momentum() = default;
  explicit Momentum(double v) : value(v) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw DomainError("momentum must be finite and nonnegative, got " + std::to_string(v));
  }
};

// Smallest admissible z - 1 for the public Q_l entry point.
inline constexpr double kLegendreZFloor = 1e-14;

inline double energy_dispersion(Momentum p) { return std::hypot(p.value, 1.0); }

// phi_0 and phi_1 written without cancellation:
//   phi_0^2 = (E+1)/(2E),  phi_1^2 = (E-1)/(2E) = p^2 / (2E(E+1)).
inline double phi0(double p) {
  const double e = std::hypot(p, 1.0);
  return std::sqrt((e + 1.0) / (2.0 * e));
}

inline double phi1(double p) {
  const double e = std::hypot(p, 1.0);
  return p / std::sqrt(2.0 * e * (e + 1.0));
}

inline double phi(int nu, Momentum p) {
  if (nu == 0) return phi0(p.value);
  if (nu == 1) return phi1(p.value);
  throw DomainError("twisting index must be 0 or 1, got " + std::to_string(nu));
}

namespace detail {

// Q_0 from zm1 = z - 1 > 0, accurate both near z = 1 and for z -> infinity.
inline double legendre_q0_zm1(double zm1) {
  if (zm1 < 1e-200) return 0.5 * (std::log(2.0 + zm1) - std::log(zm1));
  return 0.5 * std::log1p(2.0 / zm1);
}

// Fills out[0..lmax] with Q_0(z)..Q_lmax(z), z = 1 + zm1, zm1 > 0.
//
// Forward recurrence is used while the dominant companion P_l cannot amplify
// rounding by more than ~1e3, i.e. (2 lmax + 1) ln xi < ln 1e3 with
// xi = z + sqrt(z^2 - 1). Otherwise the ratios Q_k / Q_{k-1} are obtained from
// the backward (Miller) continued fraction, which is stable for the minimal
// solution, and chained from Q_0.
inline void legendre_q_sequence(int lmax, double zm1, std::span<double> out) {
  const double z = 1.0 + zm1;
  const double q0 = legendre_q0_zm1(zm1);
  out[0] = q0;
  if (lmax == 0) return;

  const double log_xi = std::log1p(zm1 + std::sqrt(zm1 * (zm1 + 2.0)));
  if ((2 * lmax + 1) * log_xi < 6.907755278982137) {
    double prev = q0;
    double cur = z * q0 - 1.0;
    out[1] = cur;
    for (int k = 1; k < lmax; ++k) {
      const double next = ((2 * k + 1) * z * cur - k * prev) / (k + 1);
      prev = cur;
      cur = next;
      out[k + 1] = cur;
    }
    return;
  }

  // Truncation error of the continued fraction decays like xi^(-2m).
  const int extra = static_cast<int>(std::ceil(19.6 / log_xi)) + 8;
  const int top = lmax + extra;
  double ratio = std::exp(-log_xi);  // asymptotic Q_{k}/Q_{k-1}
  for (int k = top; k > lmax; --k) ratio = k / ((2 * k + 1) * z - (k + 1) * ratio);
  // ratio now holds Q_{lmax+1}/Q_lmax; continue down to k = 1 storing ratios.
  for (int k = lmax; k >= 1; --k) {
    ratio = k / ((2 * k + 1) * z - (k + 1) * ratio);
    out[k] = ratio;
  }
  for (int k = 1; k <= lmax; ++k) out[k] *= out[k - 1];
}

// z - 1 for z = cosh(du), computed as 2 sinh^2(du/2) to keep precision when
// the two momenta are close.
inline double zm1_from_log_ratio(double du) {
  const double s = std::sinh(0.5 * du);
  return 2.0 * s * s;
}

inline double legendre_q_zm1(int l, double zm1) {
  if (l == 0) return legendre_q0_zm1(zm1);
  double buf[64];
  if (l < 64) {
    legendre_q_sequence(l, zm1, std::span<double>(buf, static_cast<std::size_t>(l) + 1));
    return buf[l];
  }
  std::vector<double> v(static_cast<std::size_t>(l) + 1);
  legendre_q_sequence(l, zm1, v);
  return v.back();
}

}  // namespace detail

// Legendre function of the second kind Q_l(z) for integer l >= 0, z > 1.
inline double legendre_q(int l, double z) {
  if (l < 0) throw DomainError("legendre_q: degree must be nonnegative");
  if (!(z > 1.0) || !std::isfinite(z))
    throw DomainError("legendre_q: argument must satisfy z > 1, got " + std::to_string(z));
  const double zm1 = z - 1.0;
  if (zm1 < kLegendreZFloor)
    throw DomainError("legendre_q: z - 1 below floor 1e-14 (logarithmic singularity at z = 1)");
  return detail::legendre_q_zm1(l, zm1);
}

}  // namespace scottshift
