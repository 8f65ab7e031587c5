#pragma once

// Scott-corrected ground-state energy E_TF(1) Z^{7/3} + (1/2 - s(Z/c)) Z^2
// and tables of it over atomic numbers.

// pchip calls isnan unqualified; the C header puts it in the global namespace
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "scottshift/channels.hpp"
#include "scottshift/error.hpp"
#include "scottshift/shift.hpp"
#include "scottshift/thomasfermi.hpp"

namespace scottshift {

inline constexpr double kInfiniteSpeed = std::numeric_limits<double>::infinity();

// E_TF(1) from the shooting route; the slope is resolved to 1e-11.
inline double tf_energy_constant() {
  static const double e = 3.0 / 7.0 * tf_profile(1e-11).slope / tf_length_scale();
  return e;
}

struct ShiftEstimate {
  double s = 0.0;
  double error = 0.0;
};

using ShiftSource = std::function<ShiftEstimate(double kappa)>;

// Computes s(kappa) afresh on every call.
inline ShiftSource on_demand_shift(ShiftOptions opt) {
  return [opt](double kappa) {
    const auto r = total_shift(kappa, opt);
    return ShiftEstimate{r.s_value, r.error_estimate};
  };
}

// Monotone cubic interpolation of a cached shift curve. Node values are
// returned exactly; between nodes the error is the larger of the two
// neighbouring node errors plus the distance to the linear interpolant.
class ShiftInterpolant {
 public:
  explicit ShiftInterpolant(const std::vector<CurvePoint>& curve) {
    std::vector<CurvePoint> pts;
    for (const auto& p : curve)
      if (p.ok) pts.push_back(p);
    std::sort(pts.begin(), pts.end(), [](const CurvePoint& a, const CurvePoint& b) { return a.kappa < b.kappa; });
    if (pts.empty()) throw DomainError("shift interpolant: no usable curve points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i > 0 && !(pts[i].kappa > pts[i - 1].kappa))
        throw DomainError("shift interpolant: duplicate kappa in curve");
      kappa_.push_back(pts[i].kappa);
      s_.push_back(pts[i].s);
      err_.push_back(pts[i].error);
    }
    if (kappa_.size() >= 4) {
      auto x = kappa_;
      auto y = s_;
      spline_ = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(x), std::move(y));
    }
  }

  double lower() const { return kappa_.front(); }
  double upper() const { return kappa_.back(); }
  bool covers(double kappa) const { return kappa >= lower() && kappa <= upper(); }

  ShiftEstimate operator()(double kappa) const {
    if (!covers(kappa))
      throw DomainError("kappa " + std::to_string(kappa) + " outside the cached curve [" + std::to_string(lower()) +
                        ", " + std::to_string(upper()) + "]; extrapolation refused");
    const auto it = std::lower_bound(kappa_.begin(), kappa_.end(), kappa);
    const std::size_t k = static_cast<std::size_t>(it - kappa_.begin());
    if (*it == kappa) return {s_[k], err_[k]};
    const double t = (kappa - kappa_[k - 1]) / (kappa_[k] - kappa_[k - 1]);
    const double linear = s_[k - 1] + t * (s_[k] - s_[k - 1]);
    const double value = spline_ ? (*spline_)(kappa) : linear;
    return {value, std::max(err_[k - 1], err_[k]) + std::abs(value - linear)};
  }

 private:
  std::vector<double> kappa_, s_, err_;
  std::shared_ptr<boost::math::interpolators::pchip<std::vector<double>>> spline_;
};

// Cached curve where it reaches, on-demand computation elsewhere.
inline ShiftSource cached_shift(std::shared_ptr<const ShiftInterpolant> curve, ShiftSource fallback = {}) {
  return [curve, fallback](double kappa) {
    if (curve->covers(kappa) || !fallback) return (*curve)(kappa);
    return fallback(kappa);
  };
}

struct EnergyBreakdown {
  double Z = 0.0;
  double c = kInfiniteSpeed;
  double kappa = 0.0;
  double e_tf = 0.0;
  double scott_term = 0.0;
  double total = 0.0;
  double s_used = 0.0;
  double s_error = 0.0;
};

// `model` selects the relativistic operator behind s: BrownRavenhall, or
// Chandrasekhar for the comparison model (admissible up to 2/pi only).
inline EnergyBreakdown scott_energy(double Z, double c, const ShiftSource& source,
                                    OperatorKind model = OperatorKind::BrownRavenhall,
                                    double e_tf1 = tf_energy_constant()) {
  if (!(Z > 0.0) || !std::isfinite(Z)) throw DomainError("scott_energy: Z must be positive");
  if (!(c > 0.0)) throw DomainError("scott_energy: c must be positive");
  if (model != OperatorKind::BrownRavenhall && model != OperatorKind::Chandrasekhar)
    throw DomainError("scott_energy: model must be br or chandrasekhar");
  EnergyBreakdown e;
  e.Z = Z;
  e.c = c;
  e.kappa = std::isinf(c) ? 0.0 : Z / c;
  if (e.kappa > 0.0) {
    const double crit = model == OperatorKind::BrownRavenhall ? kappa_b() : kappa_c();
    if (!admissible_coupling(e.kappa, crit)) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "Z/c = %.12g exceeds the critical coupling %.12g; c must be at least %.12g for Z = %g",
                    e.kappa, crit, Z / crit, Z);
      throw SupercriticalError(buf, crit);
    }
    if (!source) throw DomainError("scott_energy: no shift source for finite c");
    const auto est = source(e.kappa);
    e.s_used = est.s;
    e.s_error = est.error;
  }
  e.e_tf = e_tf1 * std::pow(Z, 7.0 / 3.0);
  e.scott_term = (0.5 - e.s_used) * Z * Z;
  e.total = e.e_tf + e.scott_term;
  return e;
}

using SpeedPolicy = std::function<double(double Z)>;

inline SpeedPolicy fixed_speed(double c) {
  return [c](double) { return c; };
}

// One row per Z, in input order.
inline std::vector<EnergyBreakdown> energy_table(const std::vector<double>& zs, const SpeedPolicy& c_policy,
                                                 const ShiftSource& source,
                                                 OperatorKind model = OperatorKind::BrownRavenhall) {
  std::vector<EnergyBreakdown> rows;
  rows.reserve(zs.size());
  const double e1 = tf_energy_constant();
  for (const double z : zs) rows.push_back(scott_energy(z, c_policy(z), source, model, e1));
  return rows;
}

}  // namespace scottshift
