#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "scottshift/error.hpp"
#include "scottshift/quadrature.hpp"

namespace scottshift {

enum class GridScheme { LogUniform, LogGauss };

inline std::string_view to_string(GridScheme s) {
  return s == GridScheme::LogUniform ? "log-uniform" : "log-gauss";
}

inline GridScheme parse_scheme(std::string_view s) {
  if (s == "log-uniform") return GridScheme::LogUniform;
  if (s == "log-gauss") return GridScheme::LogGauss;
  throw DomainError("unknown grid scheme '" + std::string(s) + "'");
}

// Radial momentum nodes with quadrature weights for int dp over
// [p_min, p_max]. Nodes are stored together with their logarithms because
// every kernel depends on p/q only through ln p - ln q.
struct MomentumGrid {
  std::vector<double> nodes;
  std::vector<double> log_nodes;
  std::vector<double> weights;      // for dp
  std::vector<double> log_weights;  // for du, u = ln p
  double p_min = 0.0;
  double p_max = 0.0;
  GridScheme scheme = GridScheme::LogGauss;

  std::size_t size() const { return nodes.size(); }
  double log_min() const { return std::log(p_min); }
  double log_max() const { return std::log(p_max); }

  // Sub-grid of the nodes with p <= p_cut. The new upper bound is the cell
  // edge after the last kept node, so the kept weights still tile
  // [p_min, p_max'].
  MomentumGrid truncated(double p_cut) const {
    MomentumGrid g;
    g.p_min = p_min;
    g.scheme = scheme;
    double edge = log_min();
    for (std::size_t i = 0; i < size() && nodes[i] <= p_cut; ++i) {
      g.nodes.push_back(nodes[i]);
      g.log_nodes.push_back(log_nodes[i]);
      g.weights.push_back(weights[i]);
      g.log_weights.push_back(log_weights[i]);
      edge += log_weights[i];
    }
    if (g.size() == size()) return *this;
    g.p_max = std::exp(edge);
    return g;
  }
};

using GridPtr = std::shared_ptr<const MomentumGrid>;

inline MomentumGrid build_grid(double p_min, double p_max, int n, GridScheme scheme) {
  if (!(p_min > 0.0) || !(p_max > p_min) || !std::isfinite(p_max))
    throw DomainError("build_grid: need 0 < p_min < p_max");
  if (n < 2) throw DomainError("build_grid: need at least 2 nodes");
  MomentumGrid g;
  g.p_min = p_min;
  g.p_max = p_max;
  g.scheme = scheme;
  const double a = std::log(p_min), b = std::log(p_max);
  const auto count = static_cast<std::size_t>(n);
  g.log_nodes.resize(count);
  g.log_weights.resize(count);
  if (scheme == GridScheme::LogUniform) {
    const double h = (b - a) / (n - 1);
    for (std::size_t i = 0; i < count; ++i) {
      g.log_nodes[i] = a + h * static_cast<double>(i);
      g.log_weights[i] = h;
    }
    g.log_nodes.back() = b;
    g.log_weights.front() = g.log_weights.back() = 0.5 * h;
  } else {
    auto [x, w] = quad::gauss_legendre(n);
    for (std::size_t i = 0; i < count; ++i) {
      g.log_nodes[i] = 0.5 * (b - a) * x[i] + 0.5 * (a + b);
      g.log_weights[i] = 0.5 * (b - a) * w[i];
    }
  }
  g.nodes.resize(count);
  g.weights.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    g.nodes[i] = std::exp(g.log_nodes[i]);
    g.weights[i] = g.nodes[i] * g.log_weights[i];
  }
  if (scheme == GridScheme::LogUniform) {
    g.nodes.front() = p_min;
    g.nodes.back() = p_max;
  }
  return g;
}

// Per-channel grid choice. Bound states with principal number N live at
// momenta ~ kappa / N, so the lower end scales with kappa / n_levels; the
// upper end follows the large-momentum decay in channel l. Zero entries
// select the defaults.
struct GridPolicy {
  int nodes = 1200;
  GridScheme scheme = GridScheme::LogGauss;
  double p_min = 0.0;
  double p_max = 0.0;
  double range_scale = 1.0;  // multiplies p_max and divides p_min

  double resolved_p_min(double kappa, int n_levels) const {
    const double base = p_min > 0.0 ? p_min : kappa / (2000.0 * std::max(1, n_levels));
    return base / range_scale;
  }
  double resolved_p_max(double kappa, int l) const {
    const double base = p_max > 0.0 ? p_max : 50.0 * std::max(1.0, kappa) * (l + 1);
    return base * range_scale;
  }
  MomentumGrid grid_for(double kappa, int l, int n_levels) const {
    return build_grid(resolved_p_min(kappa, n_levels), resolved_p_max(kappa, l), nodes, scheme);
  }
};

}  // namespace scottshift
