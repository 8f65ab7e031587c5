#pragma once

// Exactly checkable identities and inequalities of the critical and
// twisted operators, each reported as a CheckReport.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "scottshift/channels.hpp"
#include "scottshift/discretize.hpp"
#include "scottshift/error.hpp"
#include "scottshift/grid.hpp"
#include "scottshift/special.hpp"
#include "scottshift/spectra.hpp"

namespace scottshift {

inline constexpr std::uint64_t kDefaultSeed = 20240607;

struct CheckReport {
  std::string name;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string detail;
};

inline CheckReport make_report(std::string name, std::size_t samples, double residual, double threshold,
                               std::string detail = {}) {
  return {std::move(name), samples, residual, threshold, residual <= threshold, std::move(detail)};
}

struct TestFunction {
  std::string name;
  std::function<double(double)> f;
};

// Smooth radial test functions decaying at both ends of the momentum axis.
inline std::vector<TestFunction> default_test_functions() {
  return {
      {"p exp(-p)", [](double p) { return p * std::exp(-p); }},
      {"p^2 exp(-p)", [](double p) { return p * p * std::exp(-p); }},
      {"p / (1 + p^2)^2", [](double p) { return p / ((1 + p * p) * (1 + p * p)); }},
      {"p exp(-p^2)", [](double p) { return p * std::exp(-p * p); }},
      {"p^1.5 / (1 + p)^4", [](double p) { return std::pow(p, 1.5) / std::pow(1 + p, 4); }},
      {"p^3 exp(-2p)", [](double p) { return p * p * p * std::exp(-2 * p); }},
  };
}

namespace detail {

inline AngularChannel massless_channel(OperatorKind kind, int index) {
  if (kind == OperatorKind::BrownRavenhallMassless) return AngularChannel(index, (index - 1) / 2);
  if (kind == OperatorKind::ChandrasekharMassless) return AngularChannel(2 * index + 1, index);
  throw DomainError("expected a massless operator kind");
}

}  // namespace detail

// Ground-state representation of the critical massless operator: with
// g = p f, <f, A f> equals kappa/2 times the Dirichlet-type double integral of
// |g(p) - g(q)|^2 k(p, q) dp dq / (p q), plus the boundary term from momenta
// outside the grid range. Both sides use the grid quadrature. `index` is 2j
// for br0 and l for chandrasekhar0.
inline CheckReport gsr_residual(OperatorKind kind, int index, const std::vector<TestFunction>& tests,
                                const MomentumGrid& grid, double threshold = 1e-6) {
  const auto ch = detail::massless_channel(kind, index);
  const double kappa = channel_critical_coupling(kind, ch);
  const auto m = assemble(kind, ch, kappa, grid);
  const auto terms = detail::kernel_terms(kind, ch);
  const int lmax = detail::max_degree(terms);
  const std::size_t n = grid.size();

  std::vector<double> inside(n, 0.0);
  for (const auto& t : terms) {
    const auto r = detail::range_integrals(t.l, grid);
    for (std::size_t i = 0; i < n; ++i) inside[i] += t.coef * r[i];
  }
  // kernel matrix k(p_i, p_j), i != j
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<double> q(static_cast<std::size_t>(lmax) + 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      detail::q_cosh(lmax, grid.log_nodes[j] - grid.log_nodes[i], q);
      const double v = detail::kernel_value(terms, q, grid.nodes[i], grid.nodes[j]);
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }

  double worst = 0.0;
  std::string worst_name;
  for (const auto& tf : tests) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    std::vector<double> g(n), du(n);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = tf.f(grid.nodes[i]);
      x[static_cast<Eigen::Index>(i)] = std::sqrt(grid.weights[i]) * f;
      g[i] = grid.nodes[i] * f;
      du[i] = grid.log_weights[i];
      norm += grid.weights[i] * f * f;
    }
    if (!(norm > 1e-200)) throw DomainError("gsr_residual: test function '" + tf.name + "' has negligible norm");
    const double lhs = x.dot(m.entries * x);
    double pair = 0.0, boundary = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double d = g[i] - g[j];
        pair += k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * d * d * du[i] * du[j];
      }
      boundary += (1.0 / kappa - inside[i]) * g[i] * g[i] * du[i];
    }
    const double rhs = 0.5 * kappa * pair + kappa * boundary;
    const double rel = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
    if (rel >= worst) {
      worst = rel;
      worst_name = tf.name;
    }
  }
  const std::string name = std::string("gsr ") + std::string(to_string(kind)) + " " + label(ch);
  return make_report(name, tests.size(), worst, threshold, "worst test function: " + worst_name);
}

// min eig(M_B - c M_C) for the critical massless operators of channel
// (1/2, 0), c = (1 + (2/pi)^2)^-1, relative to ||M_B||.
inline CheckReport comparison_margin(const MomentumGrid& grid, double factor = 1.0) {
  const AngularChannel ch(1, 0);
  const auto mb = assemble(OperatorKind::BrownRavenhallMassless, ch, critical_coupling_b(1), grid);
  const auto mc = assemble(OperatorKind::ChandrasekharMassless, ch, critical_coupling_c(0), grid);
  const double c = factor / (1.0 + std::pow(2.0 / std::numbers::pi, 2));
  const double lo = min_eigenvalue(mb.entries - c * mc.entries);
  const double scale = mb.norm();
  char buf[64];
  std::snprintf(buf, sizeof buf, "min eigenvalue %.3e", lo);
  return make_report("comparison (1/2,0)", grid.size(), std::max(0.0, -lo) / scale, 1e-8, buf);
}

// Radial twisting-factor bounds on random pairs (p, q) in [lo, hi]^2:
//   (phi_0(p) - phi_0(q))^2 <= (p - q)^2 / (8 E(p)^2 E(q)^2)
//   (phi_1(p) - phi_1(q))^2 <= (p - q)^2 / (2 E(p)^2 E(q)^2)
// The residual is max(LHS/RHS) - 1; differences are formed without
// cancellation.
inline CheckReport twisting_inequalities(std::size_t samples, double lo, double hi,
                                         std::uint64_t seed = kDefaultSeed) {
  if (samples < 1) throw DomainError("twisting_inequalities: need at least one sample");
  if (!(lo >= 0.0) || !(hi > lo)) throw DomainError("twisting_inequalities: bad momentum range");
  std::mt19937_64 rng(seed);
  // half of the samples log-uniform (covers decades), half uniform
  const double llo = std::log(std::max(lo, 1e-300)), lhi = std::log(hi);
  std::uniform_real_distribution<double> ulog(llo, lhi), ulin(lo, hi);
  double worst = -1.0;
  std::size_t violations = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    double p, q;
    if (s % 2 == 0) {
      p = std::exp(ulog(rng));
      q = std::exp(ulog(rng));
    } else {
      p = ulin(rng);
      q = ulin(rng);
    }
    if (p == q) continue;
    const double ep = std::hypot(p, 1.0), eq = std::hypot(q, 1.0);
    // 1/E_p - 1/E_q = (q - p)(q + p) / (E_p E_q (E_p + E_q))
    const double inv_diff = (q - p) * (q + p) / (ep * eq * (ep + eq));
    const double d0 = 0.5 * inv_diff / (phi0(p) + phi0(q));
    const double d1 = -0.5 * inv_diff / (phi1(p) + phi1(q));
    const double base = (p - q) * (p - q) / (ep * ep * eq * eq);
    const double r0 = d0 * d0 / (base / 8.0);
    const double r1 = d1 * d1 / (base / 2.0);
    for (const double r : {r0, r1}) {
      worst = std::max(worst, r - 1.0);
      if (r - 1.0 > 1e-14) ++violations;
    }
  }
  return make_report("twisting inequalities", samples, std::max(worst, 0.0), 1e-14,
                     std::to_string(violations) + " violations");
}

struct PositivityCase {
  OperatorKind kind;
  int index;
};

inline std::vector<PositivityCase> default_positivity_cases() {
  return {{OperatorKind::BrownRavenhallMassless, 1},
          {OperatorKind::BrownRavenhallMassless, 3},
          {OperatorKind::ChandrasekharMassless, 0},
          {OperatorKind::ChandrasekharMassless, 1}};
}

// Lowest eigenvalue of T^{-1/2} M T^{-1/2}, i.e. the form measured against
// the kinetic energy. Scale free, so it reads 1 - kappa / kappa_c for modes
// the grid can hold.
inline double kinetic_relative_min(const OperatorMatrix& m) {
  Eigen::VectorXd d(m.dimension());
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = 1.0 / std::sqrt(m.grid->nodes[static_cast<std::size_t>(i)]);
  return min_eigenvalue(d.asDiagonal() * m.entries * d.asDiagonal());
}

// Positivity at kappa_c, and a negative direction at 1.01 kappa_c. The
// negative mode oscillates slowly in ln p, so the grid is widened a decade
// per side (keeping the node density) until it fits.
inline CheckReport critical_positivity(const PositivityCase& pc, const MomentumGrid& grid, int widenings = 4) {
  const auto ch = detail::massless_channel(pc.kind, pc.index);
  const double kc = channel_critical_coupling(pc.kind, ch);
  const double lo = kinetic_relative_min(assemble(pc.kind, ch, kc, grid));
  const double res = std::max(0.0, -lo);

  AssemblyOptions super;
  super.allow_supercritical = true;
  MomentumGrid g = grid;
  bool sharp = false;
  double super_min = 0.0;
  for (int w = 0; w <= widenings && !sharp; ++w) {
    super_min = kinetic_relative_min(assemble(pc.kind, ch, 1.01 * kc, g, super));
    sharp = super_min < -1e-3;
    if (!sharp && w < widenings) {
      const double old_range = g.log_max() - g.log_min();
      const double new_range = old_range + 2.0 * std::log(10.0);
      const int nodes = static_cast<int>(std::ceil(static_cast<double>(g.size()) * new_range / old_range));
      g = build_grid(g.p_min / 10.0, g.p_max * 10.0, nodes, g.scheme);
    }
  }
  char buf[192];
  std::snprintf(buf, sizeof buf, "min eig relative to kinetic: %.3e at kappa_c, %.3e at 1.01 kappa_c on [%.0e, %.0e]",
                lo, super_min, g.p_min, g.p_max);
  auto rep = make_report("critical positivity " + std::string(to_string(pc.kind)) + " " + label(ch),
                         grid.size(), res, 1e-8, buf);
  rep.passed = rep.passed && sharp;
  return rep;
}

inline CheckReport decomposition_check(std::size_t pairs, std::uint64_t seed = kDefaultSeed) {
  const auto sample = random_momentum_pairs(pairs, 1e-3, 1e3, seed);
  return make_report("kernel decomposition (1/2,l)", pairs, decomposition_residual(sample), 1e-12);
}

inline CheckReport critical_coupling_check(int two_j_max = 21) {
  double worst = 0.0;
  worst = std::max(worst, std::abs(critical_coupling_c(0) / (2.0 / std::numbers::pi) - 1.0));
  worst = std::max(worst, std::abs(critical_coupling_c(1) / (std::numbers::pi / 2.0) - 1.0));
  worst = std::max(worst, std::abs(critical_coupling_b(1) / kappa_b() - 1.0));
  double harmonic = 0.0;
  for (int tj = 1; tj <= two_j_max; tj += 2) {
    const int lo = (tj - 1) / 2;
    const double lhs = 1.0 / critical_coupling_b(tj);
    const double rhs = 0.5 * (1.0 / critical_coupling_c(lo) + 1.0 / critical_coupling_c(lo + 1));
    harmonic = std::max(harmonic, std::abs(lhs - rhs));
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "closed forms %.2e, harmonic mean %.2e", worst, harmonic);
  // residual in units of the respective tolerances (1e-9 relative, 1e-10 absolute)
  return make_report("critical couplings", static_cast<std::size_t>(3 + (two_j_max + 1) / 2),
                     std::max(worst / 1e-9, harmonic / 1e-10), 1.0, buf);
}

struct VerifyOptions {
  std::uint64_t seed = kDefaultSeed;
  int nodes = 400;
  double p_min = 1e-4;
  double p_max = 1e4;
  std::size_t twisting_samples = 1000000;
  std::size_t decomposition_pairs = 10000;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"all", "couplings", "gsr", "comparison", "twisting",
                                              "positivity", "decomposition"};
  return names;
}

// Runs the named suite; reports are returned sorted by name.
inline std::vector<CheckReport> run_suite(const std::string& suite, const VerifyOptions& opt = {}) {
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw UsageError("unknown verify suite '" + suite + "'");
  const bool all = suite == "all";
  const auto grid = build_grid(opt.p_min, opt.p_max, opt.nodes, GridScheme::LogGauss);
  std::vector<CheckReport> out;
  if (all || suite == "couplings") out.push_back(critical_coupling_check());
  if (all || suite == "gsr") {
    const auto tests = default_test_functions();
    for (const auto& pc : default_positivity_cases()) out.push_back(gsr_residual(pc.kind, pc.index, tests, grid));
  }
  if (all || suite == "comparison") out.push_back(comparison_margin(grid));
  if (all || suite == "twisting") out.push_back(twisting_inequalities(opt.twisting_samples, 0.0, 1e3, opt.seed));
  if (all || suite == "positivity")
    for (const auto& pc : default_positivity_cases()) out.push_back(critical_positivity(pc, grid));
  if (all || suite == "decomposition") out.push_back(decomposition_check(opt.decomposition_pairs, opt.seed));
  std::sort(out.begin(), out.end(), [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
  return out;
}

}  // namespace scottshift
