#pragma once

// Dense symmetric eigensolving and the closed-form hydrogen levels used as
// references for the discretized operators.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "scottshift/channels.hpp"
#include "scottshift/discretize.hpp"
#include "scottshift/error.hpp"
#include "scottshift/grid.hpp"

namespace scottshift {

// Relative threshold below which eigenvalues are treated as continuum noise.
inline constexpr double kDefaultFloorFactor = 1e-12;

struct NegativeSpectrum {
  std::vector<double> eigenvalues;  // ascending, all < -floor
  double floor = 0.0;
  OperatorKind kind = OperatorKind::Schroedinger;
  AngularChannel channel;
  double kappa = 0.0;
  Eigen::Index dimension = 0;

  std::size_t count() const { return eigenvalues.size(); }
};

inline std::vector<double> negative_eigenvalues(const Eigen::MatrixXd& a, double floor) {
  if (a.rows() != a.cols()) throw DomainError("negative_eigenvalues: matrix must be square");
  if (!(floor >= 0.0)) throw DomainError("negative_eigenvalues: floor must be nonnegative");
  std::vector<double> out;
  if (a.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("symmetric eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size() && ev[i] < -floor; ++i) out.push_back(ev[i]);
  return out;
}

inline double default_floor(const OperatorMatrix& m) { return kDefaultFloorFactor * m.norm(); }

inline NegativeSpectrum negative_spectrum(const OperatorMatrix& m, double floor) {
  NegativeSpectrum s;
  s.eigenvalues = negative_eigenvalues(m.entries, floor);
  s.floor = floor;
  s.kind = m.kind;
  s.channel = m.channel;
  s.kappa = m.kappa;
  s.dimension = m.dimension();
  return s;
}

inline NegativeSpectrum negative_spectrum(const OperatorMatrix& m) {
  return negative_spectrum(m, default_floor(m));
}

inline double min_eigenvalue(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("symmetric eigensolver did not converge");
  return solver.eigenvalues()[0];
}

// n-th eigenvalue of the Dirac-Coulomb operator in a j-subspace counted with
// radial quantum number n - 1:
//   (1 - kappa^2 / ((n - 1 + sqrt((j+1/2)^2 - kappa^2))^2 + kappa^2))^(1/2).
inline double dirac_level(int n, int two_j, double kappa) {
  if (n < 1) throw DomainError("dirac_level: n must be positive");
  if (two_j < 1 || two_j % 2 == 0) throw DomainError("dirac_level: 2j must be odd and positive");
  const double jh = 0.5 * (two_j + 1);
  if (!(kappa >= 0.0) || kappa >= 1.0 || kappa >= jh)
    throw DomainError("dirac_level: need 0 <= kappa < min(1, j + 1/2)");
  const double d = (n - 1) + std::sqrt(jh * jh - kappa * kappa);
  return std::sqrt(1.0 - kappa * kappa / (d * d + kappa * kappa));
}

// n-th level of the channel (j, l). For l = j + 1/2 the radial quantum
// number starts at 1, so the n-th level is dirac_level(n + 1, j).
inline double dirac_channel_level(int n, const AngularChannel& ch, double kappa) {
  const bool upper = 2 * ch.l == ch.two_j + 1;
  return dirac_level(upper ? n + 1 : n, ch.two_j, kappa);
}

inline double schroedinger_level(int n, int l, double kappa) {
  if (n < 1 || l < 0) throw DomainError("schroedinger_level: need n >= 1, l >= 0");
  const double nl = n + l;
  return -kappa * kappa / (2.0 * nl * nl);
}

// Largest relative deviation of the first n_max Schroedinger eigenvalues on
// this grid from the Bohr levels.
inline double schroedinger_grid_error(const AngularChannel& ch, double kappa, GridPtr grid, int n_max) {
  const auto s = negative_spectrum(assemble(OperatorKind::Schroedinger, ch, kappa, grid));
  if (static_cast<int>(s.count()) < n_max)
    throw GridResolutionError("grid resolves only " + std::to_string(s.count()) +
                              " Schroedinger levels in channel " + label(ch) + ", need " +
                              std::to_string(n_max));
  double worst = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double exact = schroedinger_level(n, ch.l, kappa);
    worst = std::max(worst, std::abs(s.eigenvalues[static_cast<std::size_t>(n - 1)] / exact - 1.0));
  }
  return worst;
}

struct SandwichRow {
  int n = 0;
  double lambda = 0.0;      // discretized eigenvalue
  double dirac = 0.0;       // Dirac level - 1 (NaN for Chandrasekhar)
  double schroedinger = 0.0;
  bool upper_ok = false;    // lambda <= dirac - 1 (BR) or lambda <= Schroedinger (C), up to tol
  bool chain_ok = false;    // dirac - 1 <= Schroedinger level (closed forms)
};

struct SandwichReport {
  OperatorKind kind = OperatorKind::BrownRavenhall;
  AngularChannel channel;
  double kappa = 0.0;
  double tol = 0.0;  // relative
  double c_hat = 0.0;
  std::vector<SandwichRow> rows;

  bool passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const SandwichRow& r) { return r.upper_ok && r.chain_ok; });
  }
};

// Checks lambda_n <= Dirac_n - 1 <= Schroedinger_n for Brown-Ravenhall, or
// lambda_n <= Schroedinger_n for Chandrasekhar. The relative tolerance on the
// first inequality defaults to 10x the same-grid Schroedinger error.
inline SandwichReport sandwich_report(OperatorKind kind, const AngularChannel& ch, double kappa,
                                      GridPtr grid, int n_max, double tol = -1.0) {
  if (kind != OperatorKind::BrownRavenhall && kind != OperatorKind::Chandrasekhar)
    throw DomainError("sandwich_report: kind must be br or chandrasekhar");
  if (n_max < 1) throw DomainError("sandwich_report: n_max must be positive");
  SandwichReport rep;
  rep.kind = kind;
  rep.channel = ch;
  rep.kappa = kappa;
  rep.tol = tol >= 0.0 ? tol : 10.0 * schroedinger_grid_error(ch, kappa, grid, n_max);
  const auto spec = negative_spectrum(assemble(kind, ch, kappa, grid));
  if (static_cast<int>(spec.count()) < n_max)
    throw GridResolutionError("only " + std::to_string(spec.count()) + " bound states of " +
                              std::string(to_string(kind)) + " in channel " + label(ch) +
                              " resolved, need " + std::to_string(n_max));
  const bool br = kind == OperatorKind::BrownRavenhall;
  for (int n = 1; n <= n_max; ++n) {
    SandwichRow r;
    r.n = n;
    r.lambda = spec.eigenvalues[static_cast<std::size_t>(n - 1)];
    r.schroedinger = schroedinger_level(n, ch.l, kappa);
    if (br) {
      r.dirac = dirac_channel_level(n, ch, kappa) - 1.0;
      r.upper_ok = r.lambda <= r.dirac + rep.tol * std::abs(r.dirac);
      r.chain_ok = r.dirac <= r.schroedinger + 1e-12;
    } else {
      r.dirac = std::numeric_limits<double>::quiet_NaN();
      r.upper_ok = r.lambda <= r.schroedinger + rep.tol * std::abs(r.schroedinger);
      r.chain_ok = true;
    }
    const double nl = n + ch.l;
    rep.c_hat = std::max(rep.c_hat, std::abs(r.lambda) * nl * nl / (kappa * kappa));
    rep.rows.push_back(r);
  }
  return rep;
}

}  // namespace scottshift
