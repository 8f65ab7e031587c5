#pragma once

// Thomas-Fermi atom for Z = 1 by two independent routes: direct minimization
// of the radial functional, and bisection shooting on the universal
// Thomas-Fermi equation chi'' = chi^{3/2} / sqrt(x). Everything else
// (potential, exchange hole, Hellmann densities) is read off a TFSolution.

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scottshift/error.hpp"
#include "scottshift/quadrature.hpp"

namespace scottshift {

inline constexpr double kGammaTF = 4.785390000313653;  // (3 pi^2)^{2/3} / 2

// Length scale of the universal profile for Z = 1: r = b x.
inline double tf_length_scale() { return 0.5 * std::pow(0.75 * std::numbers::pi, 2.0 / 3.0); }

enum class TFSolver { Minimize, Ode };

inline std::string_view to_string(TFSolver s) { return s == TFSolver::Minimize ? "minimize" : "ode"; }

struct RadialDensity {
  std::vector<double> r_nodes;
  std::vector<double> values;
  double total_charge = 0.0;
};

// 4 pi r^2 dr weights: trapezoid in ln r on the nodes, which converges fast
// for densities decaying at both ends of the log axis.
inline std::vector<double> shell_weights(const std::vector<double>& r) {
  const std::size_t n = r.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = 0.5 * std::log(r[i + 1] / r[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  for (std::size_t i = 0; i < n; ++i) w[i] *= 4.0 * std::numbers::pi * r[i] * r[i] * r[i];
  return w;
}

inline RadialDensity make_density(std::vector<double> r, std::vector<double> rho) {
  if (r.size() != rho.size() || r.size() < 2) throw DomainError("make_density: mismatched or empty arrays");
  RadialDensity d;
  const auto w = shell_weights(r);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(rho[i] >= 0.0)) throw DomainError("make_density: density must be nonnegative");
    d.total_charge += w[i] * rho[i];
  }
  d.r_nodes = std::move(r);
  d.values = std::move(rho);
  return d;
}

struct TFEnergyTerms {
  double kinetic = 0.0;
  double nuclear = 0.0;
  double hartree = 0.0;
  double total() const { return kinetic + nuclear + hartree; }
  // -(V_ne + V_ee) / (2 K); 1 for the exact minimizer
  double virial_ratio() const { return -(nuclear + hartree) / (2.0 * kinetic); }
};

struct TFSolution {
  RadialDensity density;
  std::vector<double> potential;  // phi_TF on density.r_nodes
  double energy = 0.0;            // E_TF(1)
  TFSolver solver_tag = TFSolver::Minimize;
  double Z = 1.0;
  double slope = std::numeric_limits<double>::quiet_NaN();  // chi'(0), ode route
  TFEnergyTerms terms;  // discrete functional evaluated on the returned density
  int iterations = 0;
  std::size_t projections = 0;  // nodes clipped to rho = 0 in the last step
};

struct RadialGrid {
  std::vector<double> r;
};

inline RadialGrid make_radial_grid(double r_min = 1e-5, double r_max = 50.0, int n = 400) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw DomainError("make_radial_grid: need 0 < r_min < r_max");
  if (n < 2) throw DomainError("make_radial_grid: need at least 2 nodes");
  RadialGrid g;
  g.r.resize(static_cast<std::size_t>(n));
  const double a = std::log(r_min), h = (std::log(r_max) - a) / (n - 1);
  for (int i = 0; i < n; ++i) g.r[static_cast<std::size_t>(i)] = std::exp(a + h * i);
  g.r.front() = r_min;
  g.r.back() = r_max;
  return g;
}

namespace detail {

// Hartree potential of the shell density by Newton's theorem, with the
// discrete kernel 1 / max(r_i, r_j): enclosed charge over r plus the outer
// integral of rho / r'.
inline std::vector<double> hartree_potential(const std::vector<double>& r, const std::vector<double>& w,
                                             const std::vector<double>& rho) {
  const std::size_t n = r.size();
  std::vector<double> v(n);
  double inner = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    inner += w[i] * rho[i];
    v[i] = inner / r[i];
  }
  double outer = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    v[i] += outer;
    outer += w[i] * rho[i] / r[i];
  }
  return v;
}

// Below the first node the density follows the bare-nucleus law
// rho(r_0) (r_0 / r)^{3/2}; the kinetic and nuclear integrands then go like
// r^{-1/2} and the core [0, r_0] adds 8 pi r_0^3 to their weight on node 0.
// The core charge is O(r_0^{3/2}) and is left out.
inline double core_weight(const std::vector<double>& r) { return 8.0 * std::numbers::pi * r[0] * r[0] * r[0]; }

inline TFEnergyTerms energy_terms(const std::vector<double>& r, const std::vector<double>& w,
                                  const std::vector<double>& rho, const std::vector<double>& vh, double Z) {
  TFEnergyTerms t;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double ws = i == 0 ? w[0] + core_weight(r) : w[i];
    t.kinetic += ws * 0.6 * kGammaTF * std::pow(rho[i], 5.0 / 3.0);
    t.nuclear -= ws * Z * rho[i] / r[i];
    t.hartree += 0.5 * w[i] * rho[i] * vh[i];
  }
  return t;
}

}  // namespace detail

struct StepPolicy {
  double initial_step = 0.5;
  double grow = 1.5;
  double shrink = 0.5;
  double min_step = 1e-10;
  double tolerance = 1e-12;  // relative energy change; the tail needs it tight
};

// Projected descent on the nodal values rho_i >= 0. The search direction is
// the Euler-Lagrange update rho* - rho with rho* = ([Z/r - V_H]_+ / gamma)^{3/2};
// it is the gradient preconditioned by the local Hessian of the rho^{5/3}
// term, and moves clipped nodes back in when the potential turns positive.
// Step lengths backtrack until the energy decreases.
inline TFSolution tf_minimize(const RadialGrid& grid, int iterations = 2000, const StepPolicy& step = {},
                              double Z = 1.0) {
  const auto& r = grid.r;
  const std::size_t n = r.size();
  if (n < 400) throw DomainError("tf_minimize: need at least 400 radial nodes");
  if (!(Z > 0.0)) throw DomainError("tf_minimize: Z must be positive");
  if (r.front() > 1e-5 * (1 + 1e-12) || r.back() < 50.0 * (1 - 1e-12))
    throw DomainError("tf_minimize: grid must span [1e-5, 50]");
  if (iterations < 1) throw DomainError("tf_minimize: need at least one iteration");
  const auto w = shell_weights(r);

  auto target = [&](const std::vector<double>& vh, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      const double phi = Z / r[i] - vh[i];
      out[i] = phi > 0.0 ? std::pow(phi / kGammaTF, 1.5) : 0.0;
    }
  };

  // screened hydrogenic start
  std::vector<double> rho(n), trial(n), tgt(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = std::pow(Z * std::exp(-r[i]) / (r[i] * kGammaTF), 1.5);
  auto vh = detail::hartree_potential(r, w, rho);
  double e = detail::energy_terms(r, w, rho, vh, Z).total();
  double tau = step.initial_step;
  TFSolution sol;
  bool converged = false;
  int it = 0;
  for (; it < iterations && !converged; ++it) {
    target(vh, tgt);
    double e_new = e;
    std::vector<double> vh_new;
    for (;;) {
      sol.projections = 0;
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = rho[i] + tau * (tgt[i] - rho[i]);
        if (trial[i] < 0.0) {
          trial[i] = 0.0;
          ++sol.projections;
        }
      }
      vh_new = detail::hartree_potential(r, w, trial);
      e_new = detail::energy_terms(r, w, trial, vh_new, Z).total();
      if (e_new <= e) break;
      tau *= step.shrink;
      if (tau < step.min_step) {
        e_new = e;
        break;
      }
    }
    if (tau < step.min_step) {
      converged = true;  // no descent left at machine resolution
      break;
    }
    converged = std::abs(e - e_new) < step.tolerance * std::abs(e_new);
    rho.swap(trial);
    vh.swap(vh_new);
    e = e_new;
    tau = std::min(1.0, tau * step.grow);
  }
  if (!converged)
    throw ConvergenceError("tf_minimize: no convergence after " + std::to_string(iterations) + " iterations", e);

  sol.solver_tag = TFSolver::Minimize;
  sol.Z = Z;
  sol.iterations = it;
  sol.terms = detail::energy_terms(r, w, rho, vh, Z);
  sol.energy = sol.terms.total();
  sol.potential.resize(n);
  for (std::size_t i = 0; i < n; ++i) sol.potential[i] = Z / r[i] - vh[i];
  sol.density = make_density(r, std::move(rho));
  return sol;
}

namespace detail {

using TFState = std::array<double, 2>;

enum class ShotOutcome { Crossed, TurnedUp, Open };

struct Shot {
  ShotOutcome outcome = ShotOutcome::Open;
  double x_end = 0.0;
};

// Series of the solution at small x with chi(0) = 1, chi'(0) = s.
inline TFState tf_series(double x, double s) {
  const double sx = std::sqrt(x);
  return {1.0 + s * x + 4.0 / 3.0 * x * sx + 0.4 * s * x * x * sx + x * x * x / 3.0,
          s + 2.0 * sx + s * x * sx + x * x};
}

inline void tf_rhs(const TFState& y, TFState& dy, double x) {
  dy[0] = y[1];
  dy[1] = y[0] > 0.0 ? y[0] * std::sqrt(y[0] / x) : 0.0;
}

// Integrates from the series start until the profile crosses zero, turns
// upward, or x_max; `record` sees every accepted step.
template <class Rec>
Shot tf_shoot(double s, double x_max, Rec&& record) {
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(1e-14, 1e-14, odeint::runge_kutta_dopri5<TFState>());
  double x = 1e-8;
  TFState y = tf_series(x, s);
  double dt = 1e-8;
  record(x, y);
  Shot shot;
  while (x < x_max) {
    dt = std::min(dt, x_max - x);
    if (stepper.try_step(tf_rhs, y, x, dt) == odeint::fail) continue;
    record(x, y);
    if (y[0] <= 0.0) {
      shot.outcome = ShotOutcome::Crossed;
      break;
    }
    if (y[1] >= 0.0) {
      shot.outcome = ShotOutcome::TurnedUp;
      break;
    }
  }
  shot.x_end = x;
  return shot;
}

}  // namespace detail

// Exponent of the leading correction to the 144 / x^3 tail: (sqrt(73) - 7) / 2.
inline const double kSommerfeldExponent = 0.5 * (std::sqrt(73.0) - 7.0);

struct TFProfile {
  double slope = 0.0;
  double bracket_width = 0.0;
  std::vector<double> x, chi;  // shot from the origin, trusted part
  // Outer part, integrated inward from x_far where
  // chi = 144 / x^3 (1 - tail_f x^-lambda); ascending in x.
  std::vector<double> x_tail, chi_tail;
  double tail_f = 0.0;
  double x_far = 1e3;
};

namespace detail {

inline double sommerfeld(double x, double f) {
  return 144.0 / (x * x * x) * (1.0 - f * std::pow(x, -kSommerfeldExponent));
}

// Inward integration of the decaying solution from x_far down to x_m; the
// growing companion solution shrinks on the way in, so this is stable.
// Returns chi(x_m), or -1 if the profile crossed zero and +inf if it left
// [0, 10] upward (chi <= 1 for the atom).
inline double tail_inward(double f, double x_far, double x_m, std::vector<double>* xs = nullptr,
                          std::vector<double>* ys = nullptr) {
  namespace odeint = boost::numeric::odeint;
  const double lam = kSommerfeldExponent;
  const double x3 = x_far * x_far * x_far;
  TFState y{sommerfeld(x_far, f), -144.0 / x3 * (3.0 - f * (3.0 + lam) * std::pow(x_far, -lam)) / x_far};
  auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<TFState>());
  double x = x_far, dt = -1e-3 * x_far;
  if (xs) {
    xs->assign(1, x);
    ys->assign(1, y[0]);
  }
  while (x > x_m) {
    dt = std::max(dt, x_m - x);
    if (stepper.try_step(tf_rhs, y, x, dt) == odeint::fail) continue;
    if (!(y[0] <= 10.0)) return std::numeric_limits<double>::infinity();
    if (!(y[0] > 0.0)) return -1.0;
    if (xs) {
      xs->push_back(x);
      ys->push_back(y[0]);
    }
  }
  return y[0];
}

}  // namespace detail

// Bisection on chi'(0): too steep and the profile crosses zero, too shallow
// and it turns upward. Past the point where the two bracketing shots part,
// the profile is continued by the inward tail matched in value.
inline TFProfile tf_profile(double shoot_tolerance = 1e-10) {
  if (!(shoot_tolerance > 1e-12 && shoot_tolerance < 1e-4))
    throw DomainError("tf_ode_solve: tolerance must lie in (1e-12, 1e-4)");
  constexpr double x_max = 1e4;
  auto none = [](double, const detail::TFState&) {};
  double lo = -1.7, hi = -1.5;  // lo crosses, hi turns up
  if (detail::tf_shoot(lo, x_max, none).outcome != detail::ShotOutcome::Crossed ||
      detail::tf_shoot(hi, x_max, none).outcome != detail::ShotOutcome::TurnedUp)
    throw ConvergenceError("tf_ode_solve: initial slope not bracketed", hi - lo);
  while (hi - lo > shoot_tolerance) {
    const double mid = 0.5 * (lo + hi);
    const auto shot = detail::tf_shoot(mid, x_max, none);
    if (shot.outcome == detail::ShotOutcome::Open) {
      lo = hi = mid;
      break;
    }
    (shot.outcome == detail::ShotOutcome::Crossed ? lo : hi) = mid;
  }
  TFProfile p;
  p.slope = 0.5 * (lo + hi);
  p.bracket_width = hi - lo;
  std::vector<double> xl, cl, xh, ch;
  detail::tf_shoot(lo, x_max, [&](double x, const detail::TFState& y) {
    xl.push_back(x);
    cl.push_back(y[0]);
  });
  detail::tf_shoot(hi, x_max, [&](double x, const detail::TFState& y) {
    xh.push_back(x);
    ch.push_back(y[0]);
  });
  std::size_t j = 0;
  for (std::size_t i = 0; i < xl.size(); ++i) {
    while (j + 1 < xh.size() && xh[j + 1] < xl[i]) ++j;
    if (j + 1 >= xh.size()) break;
    const double t = (xl[i] - xh[j]) / (xh[j + 1] - xh[j]);
    const double other = ch[j] + t * (ch[j + 1] - ch[j]);
    if (!(cl[i] > 0.0) || std::abs(other - cl[i]) > 1e-8 * cl[i]) break;
    p.x.push_back(xl[i]);
    p.chi.push_back(0.5 * (cl[i] + other));
  }
  if (p.x.size() < 10) throw ConvergenceError("tf_ode_solve: trusted profile too short", p.bracket_width);

  const double x_m = p.x.back(), chi_m = p.chi.back();
  // chi(x_m) decreases with f
  double f_lo = -200.0, f_hi = 0.999 * std::pow(p.x_far, kSommerfeldExponent);
  if (detail::tail_inward(f_lo, p.x_far, x_m) < chi_m || detail::tail_inward(f_hi, p.x_far, x_m) > chi_m)
    throw ConvergenceError("tf_ode_solve: tail not bracketed", f_hi - f_lo);
  for (int it = 0; it < 200 && f_hi - f_lo > 1e-12 * std::max(1.0, std::abs(f_hi)); ++it) {
    const double mid = 0.5 * (f_lo + f_hi);
    (detail::tail_inward(mid, p.x_far, x_m) > chi_m ? f_lo : f_hi) = mid;
  }
  p.tail_f = 0.5 * (f_lo + f_hi);
  std::vector<double> xs, ys;
  detail::tail_inward(p.tail_f, p.x_far, x_m, &xs, &ys);
  p.x_tail.assign(xs.rbegin(), xs.rend());
  p.chi_tail.assign(ys.rbegin(), ys.rend());
  return p;
}

namespace detail {

inline double loglog_interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t k = static_cast<std::size_t>(it - xs.begin());
  k = std::clamp<std::size_t>(k, 1, xs.size() - 1);
  const double t = (std::log(x) - std::log(xs[k - 1])) / (std::log(xs[k]) - std::log(xs[k - 1]));
  return std::exp(std::log(ys[k - 1]) + t * (std::log(ys[k]) - std::log(ys[k - 1])));
}

}  // namespace detail

inline double tf_chi(const TFProfile& p, double x) {
  if (x <= p.x.front()) return detail::tf_series(std::max(x, 0.0), p.slope)[0];
  if (x <= p.x.back()) return detail::loglog_interp(p.x, p.chi, x);
  if (x <= p.x_far) return detail::loglog_interp(p.x_tail, p.chi_tail, x);
  return detail::sommerfeld(x, p.tail_f);
}

inline TFSolution tf_ode_solve(double shoot_tolerance = 1e-10, const RadialGrid& grid = make_radial_grid()) {
  const auto prof = tf_profile(shoot_tolerance);
  const double b = tf_length_scale();
  const auto& r = grid.r;
  const std::size_t n = r.size();
  std::vector<double> rho(n), pot(n);
  for (std::size_t i = 0; i < n; ++i) {
    pot[i] = tf_chi(prof, r[i] / b) / r[i];
    rho[i] = std::pow(pot[i] / kGammaTF, 1.5);
  }
  TFSolution sol;
  sol.solver_tag = TFSolver::Ode;
  sol.Z = 1.0;
  sol.slope = prof.slope;
  sol.energy = 3.0 / 7.0 * prof.slope / b;
  const auto w = shell_weights(r);
  sol.terms = detail::energy_terms(r, w, rho, detail::hartree_potential(r, w, rho), 1.0);
  sol.potential = std::move(pot);
  sol.density = make_density(r, std::move(rho));
  return sol;
}

// phi_TF at radius r, interpolating r phi linearly in ln r. Below the grid
// r phi is held at its first value (-> Z); above it phi decays like r^-4.
inline double tf_potential(const TFSolution& sol, double r, bool* extrapolated = nullptr) {
  if (!(r > 0.0)) throw DomainError("tf_potential: r must be positive");
  const auto& x = sol.density.r_nodes;
  const auto& v = sol.potential;
  if (extrapolated) *extrapolated = r < x.front() || r > x.back();
  if (r <= x.front()) return v.front() * x.front() / r;
  if (r >= x.back()) {
    const double q = x.back() / r;
    return v.back() * q * q * q * q;
  }
  const auto it = std::upper_bound(x.begin(), x.end(), r);
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  const double t = (std::log(r) - std::log(x[k - 1])) / (std::log(x[k]) - std::log(x[k - 1]));
  const double a = v[k - 1] * x[k - 1], c = v[k] * x[k];
  return (a + t * (c - a)) / r;
}

// rho at radius s: log-log interpolation on the nodes, power-law
// continuation below the grid, zero above it.
inline double tf_density(const TFSolution& sol, double s) {
  const auto& x = sol.density.r_nodes;
  const auto& v = sol.density.values;
  if (s > x.back()) return 0.0;
  std::size_t k;
  if (s <= x.front()) {
    k = 1;
  } else {
    k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), s) - x.begin());
    if (k >= x.size()) k = x.size() - 1;
  }
  if (!(v[k - 1] > 0.0) || !(v[k] > 0.0)) {
    const double t = (s - x[k - 1]) / (x[k] - x[k - 1]);
    return std::max(0.0, v[k - 1] + t * (v[k] - v[k - 1]));
  }
  const double t = (std::log(s) - std::log(x[k - 1])) / (std::log(x[k]) - std::log(x[k - 1]));
  return std::exp(std::log(v[k - 1]) + t * (std::log(v[k]) - std::log(v[k - 1])));
}

namespace detail {

// Integral of g(s) rho(s) over [a, b], split at the grid nodes and at the
// extra kinks of g. Cells get a 10-point Gauss rule; the cell at the origin,
// where rho ~ s^{-3/2}, gets tanh-sinh.
template <class G>
double density_integral(const TFSolution& sol, double a, double b, G&& g, std::initializer_list<double> kinks = {}) {
  const auto& x = sol.density.r_nodes;
  b = std::min(b, x.back());
  if (!(b > a)) return 0.0;
  static const auto rule = quad::gauss_legendre(10);
  std::vector<double> cuts{a, b};
  for (double xi : x)
    if (xi > a && xi < b) cuts.push_back(xi);
  for (double k : kinks)
    if (k > a && k < b) cuts.push_back(k);
  std::sort(cuts.begin(), cuts.end());
  auto f = [&](double s) {
    const double v = s > 0.0 ? g(s) * tf_density(sol, s) : 0.0;
    return std::isfinite(v) ? v : 0.0;  // rho overflows only where the weight is negligible
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (!(hi > lo)) continue;
    if (lo == 0.0) {
      total += quad::tanh_sinh(f, lo, hi, 1e-10).value;
      continue;
    }
    const double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    for (std::size_t k = 0; k < rule.first.size(); ++k) total += h * rule.second[k] * f(m + h * rule.first[k]);
  }
  return total;
}

}  // namespace detail

// Charge inside the ball of radius R about a point at distance r from the
// nucleus. A shell of radius s contributes 4 pi s^2 if it lies inside the
// ball and pi s (R^2 - (r - s)^2) / r if it is cut by the sphere.
inline double enclosed_charge(const TFSolution& sol, double r, double R) {
  if (!(r >= 0.0) || !(R >= 0.0)) throw DomainError("enclosed_charge: need r, R >= 0");
  constexpr double pi = std::numbers::pi;
  if (r == 0.0) return detail::density_integral(sol, 0.0, R, [](double s) { return 4 * pi * s * s; });
  double q = 0.0;
  if (R > r) q += detail::density_integral(sol, 0.0, R - r, [](double s) { return 4 * pi * s * s; });
  q += detail::density_integral(
      sol, std::abs(r - R), r + R, [&](double s) { return pi * s * (R * R - (r - s) * (r - s)) / r; }, {r});
  return q;
}

struct ExchangeHole {
  double R = 0.0;  // radius enclosing charge 1/2
  double L = 0.0;  // potential of the enclosed charge at the center point
};

inline ExchangeHole exchange_hole(const TFSolution& sol, double r) {
  if (!(r >= 0.0)) throw DomainError("exchange_hole: r must be nonnegative");
  if (sol.density.total_charge < 0.5) throw DomainError("exchange_hole: total charge below 1/2");
  double lo = 0.0, hi = std::max(1.0, r);
  while (enclosed_charge(sol, r, hi) < 0.5) {
    hi *= 2.0;
    if (hi > 1e3 * sol.density.r_nodes.back())
      throw GridResolutionError("exchange_hole: half charge not reachable on this grid");
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    (enclosed_charge(sol, r, mid) < 0.5 ? lo : hi) = mid;
  }
  ExchangeHole h;
  h.R = 0.5 * (lo + hi);
  constexpr double pi = std::numbers::pi;
  const double R = h.R;
  if (r == 0.0) {
    h.L = detail::density_integral(sol, 0.0, R, [](double s) { return 4 * pi * s; });
  } else {
    // shell s: 2 pi s / r * [min(R, r + s) - |r - s|]_+
    auto shell = [&](double s) { return 2 * pi * s / r * std::max(0.0, std::min(R, r + s) - std::abs(r - s)); };
    h.L = detail::density_integral(sol, 0.0, r + R, shell, {r, std::abs(R - r)});
  }
  return h;
}

// Full Hartree potential of the density at radius r.
inline double hartree_at(const TFSolution& sol, double r) {
  constexpr double pi = std::numbers::pi;
  const double inner = detail::density_integral(sol, 0.0, r, [](double s) { return 4 * pi * s * s; });
  const double outer = detail::density_integral(sol, r, sol.density.r_nodes.back(), [](double s) { return 4 * pi * s; });
  return (r > 0.0 ? inner / r : 0.0) + outer;
}

inline double occupation_factor(double a, double Z) {
  if (!(a >= 0.0) || !(Z > 0.0)) throw DomainError("hellmann: need a >= 0, Z > 0");
  const double base = 1.0 - a / std::sqrt(Z);
  if (base <= 0.0) return 0.0;
  return std::pow(base, 2.0 / 3.0);
}

// phi_TF for nuclear charge Z from the Z = 1 solution: Z^{4/3} phi_1(Z^{1/3} r).
inline double scaled_potential(const TFSolution& sol, double r, double Z) {
  const double z3 = std::cbrt(Z);
  return Z * z3 * tf_potential(sol, z3 * r);
}

inline double hellmann_density(const TFSolution& sol, int l, double r, double a, double Z = 1.0) {
  if (l < 0) throw DomainError("hellmann_density: l must be nonnegative");
  if (!(r > 0.0)) throw DomainError("hellmann_density: r must be positive");
  const double nz = occupation_factor(a, Z);
  const double lh = l + 0.5;
  const double arg = nz * scaled_potential(sol, r, Z) - lh * lh / (2.0 * r * r);
  if (!(arg > 0.0)) return 0.0;
  return 2.0 * (2 * l + 1) / std::numbers::pi * std::sqrt(2.0 * arg);
}

namespace detail {

// Maximum of r^2 phi_1(r) over the grid of the solution, refined by a
// golden-section search around the best node.
inline double max_r2_phi(const TFSolution& sol) {
  const auto& x = sol.density.r_nodes;
  std::size_t best = 0;
  double bv = -1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i] * x[i] * sol.potential[i];
    if (v > bv) {
      bv = v;
      best = i;
    }
  }
  double a = x[best > 0 ? best - 1 : 0], c = x[std::min(best + 1, x.size() - 1)];
  auto f = [&](double s) { return s * s * tf_potential(sol, s); };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 80; ++it) {
    const double m1 = c - g * (c - a), m2 = a + g * (c - a);
    (f(m1) < f(m2) ? a : c) = f(m1) < f(m2) ? m1 : m2;
  }
  return std::max(bv, f(0.5 * (a + c)));
}

}  // namespace detail

// Support [r1, r2] of sigma_l^H; empty (r1 = r2 = 0) if sigma_l vanishes.
inline std::pair<double, double> hellmann_support(const TFSolution& sol, int l, double a, double Z = 1.0) {
  const double nz = occupation_factor(a, Z);
  const double lh = l + 0.5;
  // f(r) = 2 r^2 n phi_Z(r) - (l+1/2)^2 is positive exactly on the support
  auto f = [&](double r) { return 2.0 * r * r * nz * scaled_potential(sol, r, Z) - lh * lh; };
  const double z3 = std::cbrt(Z);
  const auto& x = sol.density.r_nodes;
  double peak = 0.0, fpeak = -1.0;
  for (double xi : x) {
    const double v = f(xi / z3);
    if (v > fpeak) {
      fpeak = v;
      peak = xi / z3;
    }
  }
  if (!(fpeak > 0.0)) return {0.0, 0.0};
  auto root = [&](double lo, double hi) {  // f(lo), f(hi) of opposite sign
    const bool rising = f(hi) > f(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      ((f(mid) > 0.0) == rising ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };
  double lo = peak;
  while (f(lo) > 0.0) lo *= 0.5;
  double hi = peak;
  while (f(hi) > 0.0) hi *= 2.0;
  return {root(lo, peak), root(peak, hi)};
}

// int sigma_l^H dr / (2 (2l + 1)) over the support.
inline double hellmann_occupation(const TFSolution& sol, int l, double a, double Z = 1.0) {
  const auto [r1, r2] = hellmann_support(sol, l, a, Z);
  if (!(r2 > r1)) return 0.0;
  auto f = [&](double r) { return hellmann_density(sol, l, r, a, Z); };
  const auto res = quad::tanh_sinh(f, r1, r2, 1e-10);
  return res.value / (2.0 * (2 * l + 1));
}

// k' = min { l : sigma_l^H vanishes identically }, from the maximum of
// 2 r^2 n_Z phi_Z(r) = 2 Z^{2/3} n_Z max_x x^2 phi_1(x).
inline int hellmann_cutoff(const TFSolution& sol, double a, double Z) {
  const double nz = occupation_factor(a, Z);
  const double m = 2.0 * std::pow(Z, 2.0 / 3.0) * nz * detail::max_r2_phi(sol);
  int l = 0;
  while ((l + 0.5) * (l + 0.5) < m) ++l;
  return l;
}

}  // namespace scottshift
