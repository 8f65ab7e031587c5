#pragma once

// Spectral shift s(kappa): kappa^-2 times the trace of the difference of the
// negative parts of the relativistic and Schroedinger hydrogen operators,
// summed channel by channel with extrapolated level and channel tails.

#include <boost/math/special_functions/trigamma.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "scottshift/channels.hpp"
#include "scottshift/discretize.hpp"
#include "scottshift/error.hpp"
#include "scottshift/grid.hpp"
#include "scottshift/spectra.hpp"

namespace scottshift {

struct LevelDifference {
  int n = 0;
  double schroedinger = 0.0;
  double relativistic = 0.0;
  double delta = 0.0;  // schroedinger - relativistic
};

// Power law delta ~ a (n + l)^(-gamma) fitted to the last levels.
struct LevelTailFit {
  double amplitude = 0.0;
  double exponent = 0.0;
};

struct ChannelShift {
  AngularChannel channel;
  int levels_used = 0;
  std::vector<LevelDifference> levels;
  double raw_sum = 0.0;
  double level_tail = 0.0;
  LevelTailFit fit;
  double tail_spread = 0.0;  // |tail(last quartile) - tail(last half)|
  double value = 0.0;        // (2j + 1) (raw_sum + level_tail)
};

struct ShiftOptions {
  int two_j_max = 25;
  int n_levels = 12;
  GridPolicy grid;
  OperatorKind relativistic = OperatorKind::BrownRavenhall;
  double mu = 0.0;                  // soft cutoff [. + mu]_-
  bool exact_schroedinger = false;  // subtract Bohr levels instead of the discretized ones
  bool coarse_check = true;         // rerun with half the nodes for the error estimate
  int threads = 1;
};

struct ShiftResult {
  double kappa = 0.0;
  int two_j_max = 0;
  int n_levels = 0;
  OperatorKind relativistic = OperatorKind::BrownRavenhall;
  std::vector<ChannelShift> channels;
  double channel_tail = 0.0;
  double c_hat = 0.0;
  double s_value = 0.0;
  double error_estimate = 0.0;
  double grid_delta = 0.0;
  std::vector<std::string> warnings;
};

namespace detail {

// sum_{N = first}^{last} N^(-gamma), last may be infinite (gamma > 1).
inline double power_sum(double gamma, long first, double last) {
  constexpr long kExplicit = 2000;
  double s = 0.0;
  long n = first;
  for (; n < first + kExplicit && n <= last; ++n) s += std::pow(static_cast<double>(n), -gamma);
  if (static_cast<double>(n) > last) return s;
  // Euler-Maclaurin for the remainder from n to last
  auto tail_from = [gamma](double m) {
    return std::pow(m, 1.0 - gamma) / (gamma - 1.0) + 0.5 * std::pow(m, -gamma) +
           gamma / 12.0 * std::pow(m, -gamma - 1.0);
  };
  const double m = static_cast<double>(n);
  s += tail_from(m);
  if (std::isfinite(last)) s -= tail_from(std::floor(last) + 1.0);
  return s;
}

// Least-squares line through (log N, log delta).
inline LevelTailFit fit_power_tail(const std::vector<LevelDifference>& lv, int l, std::size_t first) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double m = 0;
  for (std::size_t i = first; i < lv.size(); ++i) {
    if (!(lv[i].delta > 0.0))
      throw ConvergenceError("level tail: nonpositive level difference at n = " +
                             std::to_string(lv[i].n) + "; the grid does not resolve the Rydberg tail");
    const double x = std::log(static_cast<double>(lv[i].n + l));
    const double y = std::log(lv[i].delta);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    m += 1.0;
  }
  if (m < 2.0) throw ConvergenceError("level tail: need at least two levels for the fit");
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / m;
  return {std::exp(icpt), -slope};
}

inline double tail_sum(const LevelTailFit& f, long first_principal, double last_principal) {
  if (!(f.exponent > 1.0))
    throw ConvergenceError("level tail: fitted exponent " + std::to_string(f.exponent) +
                           " <= 1, sum over levels would diverge (grid quality)");
  return f.amplitude * power_sum(f.exponent, first_principal, last_principal);
}

}  // namespace detail

// Trace contribution of one (j, l) channel; B and S share the grid.
inline ChannelShift channel_shift(const AngularChannel& ch, double kappa, GridPtr grid, int n_levels,
                                  OperatorKind relativistic = OperatorKind::BrownRavenhall,
                                  double mu = 0.0, bool exact_schroedinger = false) {
  if (!(kappa > 0.0)) throw DomainError("channel_shift: kappa must be positive");
  if (n_levels < 4) throw DomainError("channel_shift: need at least 4 levels");
  if (relativistic != OperatorKind::BrownRavenhall && relativistic != OperatorKind::Chandrasekhar)
    throw DomainError("channel_shift: relativistic kind must be br or chandrasekhar");
  if (!(mu >= 0.0)) throw DomainError("channel_shift: mu must be nonnegative");

  // Levels with principal number n + l <= ~2l are pre-asymptotic in high
  // channels, so the fit window is pushed out by l.
  const int levels = n_levels + ch.l;
  const auto rel = negative_spectrum(assemble(relativistic, ch, kappa, grid));
  std::vector<double> sch;
  if (exact_schroedinger) {
    for (int n = 1; n <= levels; ++n) sch.push_back(schroedinger_level(n, ch.l, kappa));
  } else {
    sch = negative_spectrum(assemble(OperatorKind::Schroedinger, ch, kappa, grid)).eigenvalues;
  }
  const auto need = static_cast<std::size_t>(levels);
  if (rel.count() < need || sch.size() < need)
    throw GridResolutionError("channel " + label(ch) + ": resolved " + std::to_string(rel.count()) +
                              " relativistic and " + std::to_string(sch.size()) +
                              " Schroedinger levels, need " + std::to_string(levels));

  ChannelShift out;
  out.channel = ch;
  out.levels_used = levels;
  for (int n = 1; n <= levels; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    LevelDifference d{n, sch[i], rel.eigenvalues[i], sch[i] - rel.eigenvalues[i]};
    out.levels.push_back(d);
    // trace of [B + mu]_- - [S + mu]_- restricted to the resolved levels
    out.raw_sum += std::max(0.0, -d.relativistic - mu) - std::max(0.0, -d.schroedinger - mu);
  }

  // Levels with principal number above kappa / sqrt(2 mu) lie above -mu.
  const double last = mu > 0.0 ? std::floor(kappa / std::sqrt(2.0 * mu))
                               : std::numeric_limits<double>::infinity();
  const long first = levels + ch.l + 1;
  const auto quartile = need - std::max<std::size_t>(2, need / 4);
  const auto half = need - std::max<std::size_t>(3, need / 2);
  out.fit = detail::fit_power_tail(out.levels, ch.l, quartile);
  const auto alt = detail::fit_power_tail(out.levels, ch.l, half);
  if (static_cast<double>(first) <= last) {
    out.level_tail = detail::tail_sum(out.fit, first, last);
    out.tail_spread = std::abs(out.level_tail - detail::tail_sum(alt, first, last));
  }
  out.value = ch.degeneracy() * (out.raw_sum + out.level_tail);
  return out;
}

namespace detail {

// Runs body(i) for i in [0, count) on up to `threads` workers. Results must be
// written to per-index slots; the first exception in index order is rethrown.
inline void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto nt = static_cast<std::size_t>(std::clamp(threads, 1, 256));
  if (nt == 1 || count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(nt, count); ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct ShiftCore {
  std::vector<ChannelShift> channels;
  double channel_tail = 0.0;
  double c_hat = 0.0;
  double c_spread = 0.0;
  double level_spread = 0.0;
  double s = 0.0;
};

inline ShiftCore shift_core(double kappa, const ShiftOptions& opt) {
  const auto chans = enumerate_channels(opt.two_j_max);
  ShiftCore core;
  core.channels.resize(chans.size());
  parallel_for(chans.size(), opt.threads, [&](std::size_t i) {
    const auto& ch = chans[i];
    auto grid = std::make_shared<const MomentumGrid>(opt.grid.grid_for(kappa, ch.l, opt.n_levels));
    core.channels[i] = channel_shift(ch, kappa, grid, opt.n_levels, opt.relativistic, opt.mu,
                                     opt.exact_schroedinger);
  });

  // fixed (j, l) order for the sums
  double total = 0.0;
  for (const auto& c : core.channels) {
    total += c.value;
    core.level_spread += c.channel.degeneracy() * c.tail_spread;
  }
  // channel tail: tr_j ~ C kappa^4 j^-2 with C from the three largest j
  std::vector<double> cj;
  for (int tj = opt.two_j_max - 4; tj <= opt.two_j_max; tj += 2) {
    double tr = 0.0;
    for (const auto& c : core.channels)
      if (c.channel.two_j == tj) tr += c.value;
    const double j = 0.5 * tj;
    cj.push_back(tr * j * j / std::pow(kappa, 4));
  }
  core.c_hat = cj.back();
  core.c_spread = *std::max_element(cj.begin(), cj.end()) - *std::min_element(cj.begin(), cj.end());
  const double jnext = 0.5 * opt.two_j_max + 1.0;
  const double inv_sq = boost::math::trigamma(jnext);
  core.channel_tail = core.c_hat * std::pow(kappa, 4) * inv_sq;
  total += core.channel_tail;
  core.s = total / (kappa * kappa);
  return core;
}

}  // namespace detail

inline ShiftResult total_shift(double kappa, const ShiftOptions& opt) {
  if (!admissible_coupling(kappa, kappa_b()))
    throw SupercriticalError("total_shift: kappa must lie in (0, kappa^B = " + std::to_string(kappa_b()) + "]",
                             kappa_b());
  if (opt.two_j_max < 5) throw DomainError("total_shift: j_max must be at least 5/2");
  if (opt.two_j_max % 2 == 0) throw DomainError("total_shift: 2 j_max must be odd");
  if (opt.relativistic == OperatorKind::Chandrasekhar && !admissible_coupling(kappa, kappa_c()))
    throw SupercriticalError("total_shift: Chandrasekhar channel l = 0 is unbounded below for kappa > 2/pi",
                             kappa_c());

  const auto core = detail::shift_core(kappa, opt);
  ShiftResult r;
  r.kappa = kappa;
  r.two_j_max = opt.two_j_max;
  r.n_levels = opt.n_levels;
  r.relativistic = opt.relativistic;
  r.channels = core.channels;
  r.channel_tail = core.channel_tail;
  r.c_hat = core.c_hat;
  r.s_value = core.s;

  const double k2 = kappa * kappa;
  const double jnext = 0.5 * opt.two_j_max + 1.0;
  double err = core.level_spread / k2 + core.c_spread * k2 * boost::math::trigamma(jnext);
  if (opt.coarse_check) {
    ShiftOptions coarse = opt;
    coarse.grid.nodes = std::max(16, opt.grid.nodes / 2);
    coarse.coarse_check = false;
    r.grid_delta = std::abs(detail::shift_core(kappa, coarse).s - core.s);
    err += r.grid_delta;
  }
  r.error_estimate = err;

  double sum_abs = 0.0;
  for (const auto& c : r.channels) sum_abs += std::abs(c.value);
  if (std::abs(r.channel_tail) > 0.1 * (sum_abs + std::abs(r.channel_tail)))
    r.warnings.push_back("channel tail exceeds 10% of the total; increase j_max");
  return r;
}

struct CurvePoint {
  double kappa = 0.0;
  bool ok = false;
  double s = 0.0;
  double error = 0.0;
  std::string message;
};

// Evaluates s on every kappa; failures are recorded per point.
inline std::vector<CurvePoint> shift_curve(const std::vector<double>& kappas, const ShiftOptions& opt) {
  std::vector<CurvePoint> out;
  out.reserve(kappas.size());
  for (const double k : kappas) {
    CurvePoint p;
    p.kappa = k;
    try {
      const auto r = total_shift(k, opt);
      p.ok = true;
      p.s = r.s_value;
      p.error = r.error_estimate;
    } catch (const Error& e) {
      p.message = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

// kappa values a, a + h, ..., b for a curve specification a:b:steps.
inline std::vector<double> curve_points(double a, double b, int steps) {
  if (steps < 1) throw DomainError("curve: steps must be positive");
  if (!(a > 0.0) || !(b >= a)) throw DomainError("curve: need 0 < a <= b");
  std::vector<double> k;
  if (steps == 1) return {a};
  for (int i = 0; i < steps; ++i) k.push_back(a + (b - a) * i / (steps - 1));
  k.back() = b;
  return k;
}

}  // namespace scottshift
