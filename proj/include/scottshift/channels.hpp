#pragma once

// Partial-wave bookkeeping: (j, l) channels, operator kinds and the critical
// coupling constants of the reduced massless operators.

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scottshift/error.hpp"
#include "scottshift/quadrature.hpp"
#include "scottshift/special.hpp"

namespace scottshift {

enum class OperatorKind {
  BrownRavenhall,
  Chandrasekhar,
  Schroedinger,
  BrownRavenhallMassless,
  ChandrasekharMassless,
};

inline std::string_view to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::BrownRavenhall: return "br";
    case OperatorKind::Chandrasekhar: return "chandrasekhar";
    case OperatorKind::Schroedinger: return "schroedinger";
    case OperatorKind::BrownRavenhallMassless: return "br0";
    case OperatorKind::ChandrasekharMassless: return "chandrasekhar0";
  }
  return "?";
}

inline OperatorKind parse_kind(std::string_view s) {
  for (auto k : {OperatorKind::BrownRavenhall, OperatorKind::Chandrasekhar,
                 OperatorKind::Schroedinger, OperatorKind::BrownRavenhallMassless,
                 OperatorKind::ChandrasekharMassless})
    if (to_string(k) == s) return k;
  throw DomainError("unknown operator kind '" + std::string(s) + "'");
}

inline bool is_massless(OperatorKind k) {
  return k == OperatorKind::BrownRavenhallMassless || k == OperatorKind::ChandrasekharMassless;
}

inline bool is_brown_ravenhall(OperatorKind k) {
  return k == OperatorKind::BrownRavenhall || k == OperatorKind::BrownRavenhallMassless;
}

// Joint eigenspace of J^2 and L^2. j is stored as the odd integer 2j.
struct AngularChannel {
  int two_j = 1;
  int l = 0;

  AngularChannel() = default;
  AngularChannel(int two_j_, int l_) : two_j(two_j_), l(l_) {
    if (two_j < 1 || two_j % 2 == 0)
      throw DomainError("2j must be an odd positive integer, got " + std::to_string(two_j));
    if (l < 0 || (2 * l != two_j + 1 && 2 * l != two_j - 1))
      throw DomainError("l must equal j +- 1/2 (2j = " + std::to_string(two_j) +
                        ", l = " + std::to_string(l) + ")");
  }

  double j() const { return 0.5 * two_j; }
  int degeneracy() const { return two_j + 1; }
  // Orbital index of the lower (phi_1) component of the Brown-Ravenhall kernel.
  int partner_l() const { return two_j - l; }

  friend bool operator==(const AngularChannel&, const AngularChannel&) = default;
  friend auto operator<=>(const AngularChannel& a, const AngularChannel& b) {
    if (auto c = a.two_j <=> b.two_j; c != 0) return c;
    return a.l <=> b.l;
  }
};

inline std::string label(const AngularChannel& c) {
  return "(" + std::to_string(c.two_j) + "/2," + std::to_string(c.l) + ")";
}

// All channels with 1/2 <= j <= j_max, ordered by (j, l).
inline std::vector<AngularChannel> enumerate_channels(int two_j_max) {
  if (two_j_max < 1) throw DomainError("j_max must be at least 1/2");
  std::vector<AngularChannel> out;
  for (int tj = 1; tj <= two_j_max; tj += 2) {
    out.emplace_back(tj, (tj - 1) / 2);
    out.emplace_back(tj, (tj + 1) / 2);
  }
  return out;
}

namespace detail {

// (1/pi) * int_0^inf Q_l(cosh u) du, i.e. half of 1/kappa^C_l.
inline double half_inverse_coupling_c(int l) {
  auto f = [l](double u) {
    u = std::max(u, 1e-150);
    return legendre_q_zm1(l, zm1_from_log_ratio(u));
  };
  // The log singularity sits at u = 0; split there so each piece gets a
  // rule suited to it.
  const auto near = quad::tanh_sinh(f, 0.0, 1.0, 1e-14);
  const auto far = quad::exp_sinh(f, 1.0, 1e-14);
  quad::require(near, 1e-12, 1e-15, "critical coupling (l=" + std::to_string(l) + ")");
  quad::require(far, 1e-12, 1e-15, "critical coupling (l=" + std::to_string(l) + ")");
  return (near.value + far.value) / std::numbers::pi;
}

inline double half_inverse_coupling_b(int two_j) {
  const auto lo = static_cast<std::size_t>((two_j - 1) / 2);
  std::vector<double> q(lo + 2);
  auto f = [lo, &q](double u) {
    u = std::max(u, 1e-150);
    legendre_q_sequence(static_cast<int>(lo) + 1, zm1_from_log_ratio(u), q);
    return 0.5 * (q[lo] + q[lo + 1]);
  };
  const auto near = quad::tanh_sinh(f, 0.0, 1.0, 1e-14);
  const auto far = quad::exp_sinh(f, 1.0, 1e-14);
  quad::require(near, 1e-12, 1e-15, "critical coupling (2j=" + std::to_string(two_j) + ")");
  quad::require(far, 1e-12, 1e-15, "critical coupling (2j=" + std::to_string(two_j) + ")");
  return (near.value + far.value) / std::numbers::pi;
}

class CouplingCache {
 public:
  template <class F>
  double get(char kind, int index, F&& compute) {
    {
      std::lock_guard lock(mu_);
      if (auto it = values_.find({kind, index}); it != values_.end()) return it->second;
    }
    const double v = compute();
    std::lock_guard lock(mu_);
    values_.emplace(std::pair{kind, index}, v);
    return v;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<char, int>, double> values_;
};

inline CouplingCache& coupling_cache() {
  static CouplingCache cache;
  return cache;
}

}  // namespace detail

// kappa^C_l = 1 / int_0^inf k^C_l((t + 1/t)/2) dt/t.
inline double critical_coupling_c(int l) {
  if (l < 0) throw DomainError("critical_coupling_c: l must be nonnegative");
  return detail::coupling_cache().get('C', l, [l] {
    return 1.0 / (2.0 * detail::half_inverse_coupling_c(l));
  });
}

// kappa^B_j for the massless Brown-Ravenhall kernel k^B_j.
inline double critical_coupling_b(int two_j) {
  if (two_j < 1 || two_j % 2 == 0) throw DomainError("critical_coupling_b: 2j must be odd and positive");
  return detail::coupling_cache().get('B', two_j, [two_j] {
    return 1.0 / (2.0 * detail::half_inverse_coupling_b(two_j));
  });
}

// Global critical constants: kappa^B = 2/(2/pi + pi/2), kappa^C = 2/pi.
inline double kappa_b() { return 2.0 / (2.0 / std::numbers::pi + std::numbers::pi / 2.0); }
inline double kappa_c() { return 2.0 / std::numbers::pi; }

// kappa <= critical, allowing the few ulps lost when a critical value is
// written out in decimal and read back.
inline bool admissible_coupling(double kappa, double critical) {
  return kappa > 0.0 && kappa <= critical * (1.0 + 1e-15);
}

// Largest coupling for which the reduced operator of this kind is bounded below.
inline double channel_critical_coupling(OperatorKind kind, const AngularChannel& ch) {
  switch (kind) {
    case OperatorKind::BrownRavenhall:
    case OperatorKind::BrownRavenhallMassless: return critical_coupling_b(ch.two_j);
    case OperatorKind::Chandrasekhar:
    case OperatorKind::ChandrasekharMassless: return critical_coupling_c(ch.l);
    case OperatorKind::Schroedinger: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

}  // namespace scottshift
