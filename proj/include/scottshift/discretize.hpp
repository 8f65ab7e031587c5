#pragma once

// Nystrom assembly of the reduced one-channel operators on a momentum grid.
//
// The matrix acts on x_i = sqrt(w_i) f(p_i). Off-diagonal entries are
// -kappa sqrt(w_i w_j) k(p_i, p_j). The logarithmic singularity of the kernel
// at p = q is removed by subtraction against the scale-invariant function
// f(q) ~ 1/q, whose kernel integral over the grid range is known from a
// one-dimensional quadrature. For the massless kinds this makes the discrete
// quadratic form a weighted graph Laplacian in g = p f, so the discrete
// critical operator is nonnegative exactly as the continuous one is.
//
// Massive relativistic kinds additionally get one asymptotic basis function
// t(q) = (P/q)^(1+gamma) on (P, inf), P = p_max, with gamma the decay rate of
// the zero-energy solution of the massless channel operator. Without it the
// eigenvalues converge only logarithmically in p_max close to criticality.

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "scottshift/channels.hpp"
#include "scottshift/error.hpp"
#include "scottshift/grid.hpp"
#include "scottshift/quadrature.hpp"
#include "scottshift/special.hpp"

namespace scottshift {

namespace detail {

// One summand coef * t(p) Q_l(z) t(q) / pi of a channel kernel; twist selects
// t = 1 (-1), phi_0 (0) or phi_1 (1).
struct KernelTerm {
  int l;
  int twist;
  double coef;
};

inline std::vector<KernelTerm> kernel_terms(OperatorKind kind, const AngularChannel& ch) {
  switch (kind) {
    case OperatorKind::BrownRavenhall: return {{ch.l, 0, 1.0}, {ch.partner_l(), 1, 1.0}};
    case OperatorKind::BrownRavenhallMassless: {
      const int lo = (ch.two_j - 1) / 2;
      return {{lo, -1, 0.5}, {lo + 1, -1, 0.5}};
    }
    case OperatorKind::Chandrasekhar:
    case OperatorKind::ChandrasekharMassless:
    case OperatorKind::Schroedinger: return {{ch.l, -1, 1.0}};
  }
  return {};
}

inline OperatorKind massless_partner(OperatorKind kind) {
  return is_brown_ravenhall(kind) ? OperatorKind::BrownRavenhallMassless
                                  : OperatorKind::ChandrasekharMassless;
}

inline int max_degree(const std::vector<KernelTerm>& terms) {
  int m = 0;
  for (const auto& t : terms) m = std::max(m, t.l);
  return m;
}

inline double twist_value(int twist, double p) {
  if (twist < 0) return 1.0;
  return twist == 0 ? phi0(p) : phi1(p);
}

inline double kinetic_symbol(OperatorKind kind, double p) {
  switch (kind) {
    case OperatorKind::BrownRavenhall:
    case OperatorKind::Chandrasekhar: return p * p / (std::hypot(p, 1.0) + 1.0);
    case OperatorKind::Schroedinger: return 0.5 * p * p;
    case OperatorKind::BrownRavenhallMassless:
    case OperatorKind::ChandrasekharMassless: return p;
  }
  return 0.0;
}

// Q_0..Q_lmax at z = cosh(du). Beyond |du| = 700 every Q_l is below 1e-304
// and is returned as zero.
inline void q_cosh(int lmax, double du, std::span<double> q) {
  du = std::abs(du);
  if (du > 700.0) {
    std::fill(q.begin(), q.begin() + lmax + 1, 0.0);
    return;
  }
  legendre_q_sequence(lmax, zm1_from_log_ratio(du), q);
}

inline double kernel_value(const std::vector<KernelTerm>& terms, std::span<const double> q,
                           double p1, double p2) {
  double k = 0.0;
  for (const auto& t : terms)
    k += t.coef * twist_value(t.twist, p1) * twist_value(t.twist, p2) * q[static_cast<std::size_t>(t.l)];
  return k / std::numbers::pi;
}

// Q_l(cosh s) * exp(log_w(s)). For s >= 40 the leading asymptotic form of Q_l
// (relative error ~ l^2 e^{-2s}) is combined with the weight in log space so
// growing weights cannot overflow.
template <class LogW>
double q_cosh_weighted(int l, double s, LogW&& log_w) {
  if (s < 40.0) return legendre_q_zm1(l, zm1_from_log_ratio(std::max(s, 1e-150))) * std::exp(log_w(s));
  const double log_q = std::lgamma(l + 1.0) + 0.5 * std::log(std::numbers::pi) -
                       std::lgamma(l + 1.5) - (l + 1) * s;
  return std::exp(log_q + log_w(s));
}

inline double log_cosh(double x) {
  x = std::abs(x);
  return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
}

// log(sinh(g s)/g), with the limit log(s) at g = 0.
inline double log_sinhc(double g, double s) {
  if (g == 0.0 || g * s < 1e-8) return std::log(s);
  const double x = g * s;
  return x + std::log(-std::expm1(-2.0 * x)) - std::numbers::ln2 - std::log(g);
}

// int_0^inf f(s) ds for integrands with an integrable singularity at s = 0.
template <class F>
double half_line(F&& f, const std::string& what, double rel_tol = 1e-12) {
  const auto near = quad::tanh_sinh(f, 0.0, 1.0, rel_tol);
  const auto far = quad::exp_sinh(f, 1.0, rel_tol);
  quad::require(near, 1e-9, 1e-14, what);
  quad::require(far, 1e-9, 1e-14, what);
  return near.value + far.value;
}

// (1/pi) * int_{pmin}^{pmax} Q_l(z(p_i, q)) dq / q at every node, i.e.
// (1/pi) [F(u_i - a) + F(b - u_i)] with F(s) = int_0^s Q_l(cosh v) dv.
inline std::vector<double> range_integrals(int l, const MomentumGrid& grid) {
  const std::size_t n = grid.size();
  const double a = grid.log_min(), b = grid.log_max();
  std::vector<std::pair<double, std::size_t>> s;
  s.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    s.emplace_back(std::max(0.0, grid.log_nodes[i] - a), i);
    s.emplace_back(std::max(0.0, b - grid.log_nodes[i]), i);
  }
  std::sort(s.begin(), s.end());
  auto f = [l](double v) { return legendre_q_zm1(l, zm1_from_log_ratio(std::max(v, 1e-150))); };
  std::vector<double> out(n, 0.0);
  double acc = 0.0, prev = 0.0;
  for (const auto& [si, idx] : s) {
    if (si > prev) {
      const double h = si - prev;
      if (prev > 0.0 && h < 1e-3 * si) {
        acc += h * (f(prev) + 4.0 * f(prev + 0.5 * h) + f(si)) / 6.0;
      } else {
        auto shifted = [&f, prev](double x) { return f(prev + x); };
        const auto r = quad::tanh_sinh(shifted, 0.0, h, 1e-13);
        quad::require(r, 1e-9, 1e-10, "range integral");
        acc += r.value;
      }
      prev = si;
    }
    out[idx] += acc;
  }
  for (auto& v : out) v /= std::numbers::pi;
  return out;
}

}  // namespace detail

// Channel kernel k(p, q) for p != q.
inline double channel_kernel(OperatorKind kind, const AngularChannel& ch, Momentum p, Momentum q) {
  if (p.value == q.value)
    throw DomainError("channel_kernel: p = q is the singular diagonal, handled by assembly");
  if (p.value == 0.0 || q.value == 0.0) return 0.0;
  const auto terms = detail::kernel_terms(kind, ch);
  std::array<double, 64> buf{};
  const int lmax = detail::max_degree(terms);
  std::vector<double> big;
  std::span<double> qv(buf);
  if (lmax >= 64) {
    big.resize(static_cast<std::size_t>(lmax) + 1);
    qv = big;
  }
  detail::q_cosh(lmax, std::log(p.value / q.value), qv);
  return detail::kernel_value(terms, qv, p.value, q.value);
}

// Parameters of the asymptotic basis function appended to massive relativistic
// assemblies.
struct TailElement {
  bool present = false;
  double start = 0.0;   // P
  double gamma = 0.0;   // t(q) = (P/q)^(1+gamma)
  double mass = 0.0;    // int t^2 dq
};

struct AssemblyOptions {
  bool tail_element = true;         // only used by massive relativistic kinds
  bool allow_supercritical = false;  // for sharpness checks of the critical coupling
};

struct OperatorMatrix {
  OperatorKind kind = OperatorKind::Schroedinger;
  AngularChannel channel;
  double kappa = 0.0;
  GridPtr grid;
  Eigen::MatrixXd entries;
  TailElement tail;

  Eigen::Index dimension() const { return entries.rows(); }
  double norm() const { return entries.cwiseAbs().rowwise().sum().maxCoeff(); }
};

namespace detail {

// M(g) = 2 int_0^inf k0(cosh s) cosh(g s) ds for the massless kernel terms.
inline double mellin_symbol(const std::vector<KernelTerm>& terms, double g) {
  double total = 0.0;
  for (const auto& t : terms) {
    auto f = [&](double s) {
      return q_cosh_weighted(t.l, s, [g](double x) { return log_cosh(g * x); });
    };
    total += t.coef * half_line(f, "tail exponent");
  }
  return 2.0 * total / std::numbers::pi;
}

// Decay exponent gamma in [0, l_min + 1) solving kappa M(gamma) = 1.
inline double tail_exponent(const std::vector<KernelTerm>& terms, double kappa) {
  const double m0 = mellin_symbol(terms, 0.0);
  if (kappa * m0 >= 1.0 - 1e-12) return 0.0;
  int lmin = terms.front().l;
  for (const auto& t : terms) lmin = std::min(lmin, t.l);
  const double top = lmin + 1.0;
  auto g = [&](double x) { return kappa * mellin_symbol(terms, x) - 1.0; };
  double delta = 0.5 * top;
  double hi = top - delta;
  for (int it = 0; it < 80 && g(hi) <= 0.0; ++it) {
    delta *= 0.25;
    hi = top - delta;
  }
  if (g(hi) <= 0.0) throw ConvergenceError("tail exponent: no sign change below l_min + 1");
  std::uintmax_t max_iter = 200;
  const auto [lo_x, hi_x] = boost::math::tools::toms748_solve(
      g, 0.0, hi, kappa * m0 - 1.0, g(hi), boost::math::tools::eps_tolerance<double>(50), max_iter);
  return 0.5 * (lo_x + hi_x);
}

// int_0^inf k0(cosh s) sinh(g s)/g ds (limit s k0 at g = 0).
inline double tail_bracket(const std::vector<KernelTerm>& terms, double g) {
  double total = 0.0;
  for (const auto& t : terms) {
    auto f = [&](double s) {
      return q_cosh_weighted(t.l, s, [g](double x) { return log_sinhc(g, x); });
    };
    total += t.coef * half_line(f, "tail self-energy");
  }
  return total / std::numbers::pi;
}

// phi_a(p) phi_a(q) - 1/2 without cancellation for large momenta.
inline double twist_excess(int twist, double p, double q) {
  const double a = 0.5 / std::hypot(p, 1.0), b = 0.5 / std::hypot(q, 1.0);
  const double sign = twist == 0 ? 1.0 : -1.0;
  const double num = sign * 0.5 * (a + b) + a * b;
  return num / (twist_value(twist, p) * twist_value(twist, q) + 0.5);
}

// int int_{(P,inf)^2} t(p) [k - k0](p, q) t(q) dp dq / P^2 in the coordinates
// m = a + b, s = a - b with p = P e^a, q = P e^b.
inline double tail_massive_correction(const std::vector<KernelTerm>& terms, double P, double g) {
  double total = 0.0;
  for (const auto& t : terms) {
    if (t.twist < 0) continue;
    auto inner = [&](double s) {
      auto h = [&](double m) {
        if (m > 700.0) return 0.0;
        const double p = P * std::exp(0.5 * (m + s)), q = P * std::exp(0.5 * (m - s));
        return std::exp(-g * m) * twist_excess(t.twist, p, q);
      };
      const auto r = quad::gauss_kronrod(h, s, std::numeric_limits<double>::infinity(), 1e-11, 20);
      return r.value;
    };
    auto f = [&](double s) {
      if (s > 700.0) return 0.0;
      return legendre_q_zm1(t.l, zm1_from_log_ratio(std::max(s, 1e-150))) * inner(s);
    };
    total += t.coef * half_line(f, "tail kernel correction", 1e-10);
  }
  return total / std::numbers::pi;
}

inline void add_tail(OperatorMatrix& m, const std::vector<KernelTerm>& terms) {
  const auto& grid = *m.grid;
  const double P = grid.p_max;
  const auto massless = kernel_terms(massless_partner(m.kind), m.channel);
  const double g = tail_exponent(massless, m.kappa);
  const double mass = P / (1.0 + 2.0 * g);
  const double kappa = m.kappa;
  const int lmax = max_degree(terms);

  // kinetic remainder int (E - 1 - q) t^2 dq with E - 1 - q = 1/(E + q) - 1
  auto rem = [&](double a) {
    const double q = P * std::exp(a);
    return (1.0 / (std::hypot(q, 1.0) + q) - 1.0) * std::exp(-(1.0 + 2.0 * g) * a);
  };
  const auto kin = quad::gauss_kronrod(rem, 0.0, std::numeric_limits<double>::infinity(), 1e-12);
  quad::require(kin, 1e-9, 1e-15, "tail kinetic energy");

  double self = kappa * P * P * tail_bracket(massless, g) + P * kin.value;
  if (is_brown_ravenhall(m.kind)) self -= kappa * P * P * tail_massive_correction(terms, P, g);

  const auto n = static_cast<Eigen::Index>(grid.size());
  m.entries.conservativeResize(n + 1, n + 1);
  m.entries(n, n) = self / mass;
  std::vector<double> q(static_cast<std::size_t>(lmax) + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = grid.nodes[static_cast<std::size_t>(i)];
    auto f = [&](double a) {
      if (a > 700.0) return 0.0;
      const double qq = P * std::exp(a);
      q_cosh(lmax, std::log(qq / p), q);
      return kernel_value(terms, q, p, qq) * std::exp(-g * a);
    };
    const auto near = quad::tanh_sinh(f, 0.0, 1.0, 1e-11);
    const auto far = quad::exp_sinh(f, 1.0, 1e-11);
    const double overlap = P * (near.value + far.value);
    const double v = -kappa * std::sqrt(grid.weights[static_cast<std::size_t>(i)] / mass) * overlap;
    m.entries(i, n) = v;
    m.entries(n, i) = v;
  }
  m.tail = {true, P, g, mass};
}

}  // namespace detail

inline OperatorMatrix assemble(OperatorKind kind, const AngularChannel& ch, double kappa,
                               GridPtr grid, const AssemblyOptions& opt = {}) {
  if (!grid) throw DomainError("assemble: null grid");
  if (grid->size() < 16) throw DomainError("assemble: grid needs at least 16 nodes");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("assemble: kappa must be finite and nonnegative");
  if (kind != OperatorKind::Schroedinger && !opt.allow_supercritical) {
    const double crit = channel_critical_coupling(kind, ch);
    if (kappa > crit * (1.0 + 1e-12))
      throw SupercriticalError("assemble: kappa = " + std::to_string(kappa) +
                                   " exceeds the critical coupling " + std::to_string(crit) +
                                   " of channel " + label(ch) + " for " + std::string(to_string(kind)),
                               crit);
  }

  const auto& g = *grid;
  const std::size_t n = g.size();
  const auto terms = detail::kernel_terms(kind, ch);
  const int lmax = detail::max_degree(terms);
  const std::size_t nt = terms.size();

  OperatorMatrix m;
  m.kind = kind;
  m.channel = ch;
  m.kappa = kappa;
  m.grid = grid;
  m.entries.setZero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  std::vector<std::vector<double>> tw(nt, std::vector<double>(n));
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t i = 0; i < n; ++i) tw[t][i] = detail::twist_value(terms[t].twist, g.nodes[i]);

  // subtraction sums: sum_{j != i} coef Q_l(z_ij)/pi * du_j
  std::vector<std::vector<double>> sub(nt, std::vector<double>(n, 0.0));
  std::vector<double> sqw(n);
  for (std::size_t i = 0; i < n; ++i) sqw[i] = std::sqrt(g.weights[i]);

  std::vector<double> q(static_cast<std::size_t>(lmax) + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      detail::q_cosh(lmax, g.log_nodes[j] - g.log_nodes[i], q);
      double k = 0.0;
      for (std::size_t t = 0; t < nt; ++t) {
        const double kt = terms[t].coef * q[static_cast<std::size_t>(terms[t].l)] / std::numbers::pi;
        k += kt * tw[t][i] * tw[t][j];
        sub[t][i] += kt * g.log_weights[j];
        sub[t][j] += kt * g.log_weights[i];
      }
      const double v = -kappa * sqw[i] * sqw[j] * k;
      m.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      m.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }

  std::vector<double> diag_pot(n, 0.0);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto range = detail::range_integrals(terms[t].l, g);
    for (std::size_t i = 0; i < n; ++i)
      diag_pot[i] += g.nodes[i] * tw[t][i] * tw[t][i] * (terms[t].coef * range[i] - sub[t][i]);
  }
  for (std::size_t i = 0; i < n; ++i)
    m.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
        detail::kinetic_symbol(kind, g.nodes[i]) - kappa * diag_pot[i];

  const bool massive_rel = kind == OperatorKind::BrownRavenhall || kind == OperatorKind::Chandrasekhar;
  if (opt.tail_element && massive_rel && kappa > 0.0 && !opt.allow_supercritical) detail::add_tail(m, terms);
  return m;
}

inline OperatorMatrix assemble(OperatorKind kind, const AngularChannel& ch, double kappa,
                               const MomentumGrid& grid, const AssemblyOptions& opt = {}) {
  return assemble(kind, ch, kappa, std::make_shared<const MomentumGrid>(grid), opt);
}

// Residual of the kernel-level splitting of the j = 1/2 Brown-Ravenhall
// channels into two Chandrasekhar-type pieces: Q_l always pairs with phi_0 and
// Q_{1-l} with phi_1. The kinetic symbols split through the harmonic-mean
// identity of the critical couplings, whose relative residual is included.
inline double decomposition_residual(std::span<const std::pair<double, double>> pairs) {
  const double kb = critical_coupling_b(1);
  const double kc0 = critical_coupling_c(0), kc1 = critical_coupling_c(1);
  double worst = 0.0;
  for (const auto& [p, q] : pairs) {
    if (p == q) continue;
    const double du = std::log(p / q);
    const double zm1 = detail::zm1_from_log_ratio(du);
    const double q0 = detail::legendre_q_zm1(0, zm1), q1 = detail::legendre_q_zm1(1, zm1);
    for (int l = 0; l <= 1; ++l) {
      const double lhs = channel_kernel(OperatorKind::BrownRavenhall, AngularChannel(1, l),
                                        Momentum(p), Momentum(q));
      const double ql = l == 0 ? q0 : q1, qo = l == 0 ? q1 : q0;
      const double rhs = (phi0(p) * ql * phi0(q) + phi1(p) * qo * phi1(q)) / std::numbers::pi;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    for (const double x : {p, q}) {
      // kappa^B [(kappa^C_0)^-1 (E-1)/(2 phi_0^2) phi_0^2 + (kappa^C_1)^-1 (E-1)/(2 phi_1^2) phi_1^2]
      const double t = detail::kinetic_symbol(OperatorKind::BrownRavenhall, x);
      if (t == 0.0) continue;
      const double split = kb * (t / (2.0 * kc0) + t / (2.0 * kc1));
      worst = std::max(worst, std::abs(split - t) / t);
    }
  }
  return worst;
}

// Uniform random pairs in log space over [lo, hi]^2.
inline std::vector<std::pair<double, double>> random_momentum_pairs(std::size_t count, double lo,
                                                                   double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  while (out.size() < count) {
    const double p = std::exp(u(rng)), q = std::exp(u(rng));
    if (p != q) out.emplace_back(p, q);
  }
  return out;
}

// Binary dump: 32-byte little-endian header followed by the matrix in
// row-major order.
//   0 magic "SCSH" | 4 u32 version | 8 u32 N | 12 u8 kind | 13 u8 reserved
//  14 u16 2j | 16 u16 l | 18..23 reserved | 24 f64 kappa
struct MatrixDumpHeader {
  std::uint32_t version = 1;
  std::uint32_t n = 0;
  OperatorKind kind = OperatorKind::Schroedinger;
  std::uint16_t two_j = 1;
  std::uint16_t l = 0;
  double kappa = 0.0;
};

inline constexpr std::uint32_t kMatrixDumpVersion = 1;

namespace detail {

template <class T>
void put_le(unsigned char* out, T v) {
  std::uint64_t bits = 0;
  if constexpr (std::is_floating_point_v<T>) {
    bits = std::bit_cast<std::uint64_t>(v);
  } else {
    bits = static_cast<std::uint64_t>(v);
  }
  for (std::size_t b = 0; b < sizeof(T); ++b) out[b] = static_cast<unsigned char>(bits >> (8 * b));
}

template <class T>
T get_le(const unsigned char* in) {
  std::uint64_t bits = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) bits |= static_cast<std::uint64_t>(in[b]) << (8 * b);
  if constexpr (std::is_floating_point_v<T>) {
    return std::bit_cast<T>(bits);
  } else {
    return static_cast<T>(bits);
  }
}

inline int kind_code(OperatorKind k) { return static_cast<int>(k); }

}  // namespace detail

inline void write_matrix_dump(const std::string& path, const OperatorMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  std::array<unsigned char, 32> h{};
  std::memcpy(h.data(), "SCSH", 4);
  detail::put_le<std::uint32_t>(h.data() + 4, kMatrixDumpVersion);
  detail::put_le<std::uint32_t>(h.data() + 8, static_cast<std::uint32_t>(m.dimension()));
  h[12] = static_cast<unsigned char>(detail::kind_code(m.kind));
  detail::put_le<std::uint16_t>(h.data() + 14, static_cast<std::uint16_t>(m.channel.two_j));
  detail::put_le<std::uint16_t>(h.data() + 16, static_cast<std::uint16_t>(m.channel.l));
  detail::put_le<double>(h.data() + 24, m.kappa);
  out.write(reinterpret_cast<const char*>(h.data()), 32);
  std::array<unsigned char, 8> buf{};
  for (Eigen::Index i = 0; i < m.dimension(); ++i)
    for (Eigen::Index j = 0; j < m.dimension(); ++j) {
      detail::put_le<double>(buf.data(), m.entries(i, j));
      out.write(reinterpret_cast<const char*>(buf.data()), 8);
    }
  if (!out) throw Error("write to '" + path + "' failed");
}

inline std::pair<MatrixDumpHeader, Eigen::MatrixXd> read_matrix_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::array<unsigned char, 32> h{};
  in.read(reinterpret_cast<char*>(h.data()), 32);
  if (!in || std::memcmp(h.data(), "SCSH", 4) != 0) throw Error("'" + path + "' is not a matrix dump");
  MatrixDumpHeader hdr;
  hdr.version = detail::get_le<std::uint32_t>(h.data() + 4);
  if (hdr.version != kMatrixDumpVersion) throw Error("unsupported matrix dump version");
  hdr.n = detail::get_le<std::uint32_t>(h.data() + 8);
  if (h[12] > 4) throw Error("matrix dump: unknown operator kind code");
  hdr.kind = static_cast<OperatorKind>(h[12]);
  hdr.two_j = detail::get_le<std::uint16_t>(h.data() + 14);
  hdr.l = detail::get_le<std::uint16_t>(h.data() + 16);
  hdr.kappa = detail::get_le<double>(h.data() + 24);
  Eigen::MatrixXd a(hdr.n, hdr.n);
  std::array<unsigned char, 8> buf{};
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      in.read(reinterpret_cast<char*>(buf.data()), 8);
      if (!in) throw Error("matrix dump '" + path + "' is truncated");
      a(i, j) = detail::get_le<double>(buf.data());
    }
  return {hdr, std::move(a)};
}

}  // namespace scottshift
