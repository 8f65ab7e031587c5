// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "scottshift/cli.hpp"
#include "scottshift/scottshift.hpp"

using namespace scottshift;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += "[failed: " + what + "] ";
    }
  }
  void note(const std::string& s) { detail += s + "; "; }
};

std::string f(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

int worker_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

Outcome criterion_1() {
  Outcome o;
  const auto t0 = Clock::now();
  constexpr double pi = std::numbers::pi;
  const double e0 = std::abs(critical_coupling_c(0) / (2 / pi) - 1);
  const double e1 = std::abs(critical_coupling_c(1) / (pi / 2) - 1);
  const double eb = std::abs(critical_coupling_b(1) / (2 / (2 / pi + pi / 2)) - 1);
  double harm = 0.0;
  for (int tj = 1; tj <= 21; tj += 2) {
    const int lo = (tj - 1) / 2;
    const double lhs = 1 / critical_coupling_b(tj);
    const double rhs = 0.5 * (1 / critical_coupling_c(lo) + 1 / critical_coupling_c(lo + 1));
    harm = std::max(harm, std::abs(lhs / rhs - 1));
  }
  const double dt = seconds_since(t0);
  o.require(std::max({e0, e1, eb}) < 1e-9, "closed forms");
  o.require(harm < 1e-10, "harmonic-mean identity");
  o.require(dt < 5.0, "runtime");
  o.note(f("rel err C0 %.1e C1 %.1e B1/2 %.1e", e0, e1, eb));
  o.note(f("harmonic identity %.1e for j <= 21/2", harm));
  o.note(f("%.2f s", dt));
  return o;
}

double calibration_error = 0.0;

Outcome criterion_2() {
  Outcome o;
  const auto t0 = Clock::now();
  GridPolicy p;
  for (double k : {0.3, 1.0})
    for (int l = 0; l <= 3; ++l) {
      const auto g = std::make_shared<const MomentumGrid>(p.grid_for(k, l, 12));
      calibration_error = std::max(calibration_error, schroedinger_grid_error(AngularChannel(2 * l + 1, l), k, g, 6));
    }
  const double dt = seconds_since(t0);
  o.require(calibration_error < 1e-3, "Bohr levels");
  o.require(dt < 60.0, "runtime");
  o.note(f("max rel err %.2e over n <= 6, l <= 3, kappa in {0.3, 1}, N = 1200", calibration_error));
  o.note(f("%.1f s", dt));
  return o;
}

Outcome criterion_3() {
  Outcome o;
  GridPolicy p;
  const double tol = 10.0 * calibration_error;
  double c_hat = 0.0;
  int rows = 0;
  for (const double k : {0.3, 0.6, kappa_b()})
    for (const auto& ch : enumerate_channels(5)) {
      const auto g = std::make_shared<const MomentumGrid>(p.grid_for(k, ch.l, 12));
      const auto rep = sandwich_report(OperatorKind::BrownRavenhall, ch, k, g, 6, tol);
      for (const auto& r : rep.rows) {
        ++rows;
        o.require(r.upper_ok, f("br lambda_%g > dirac - 1 at kappa %.4f", r.n, k) + " " + label(ch));
        o.require(r.chain_ok, "dirac - 1 > Bohr " + label(ch));
      }
      c_hat = std::max(c_hat, rep.c_hat);
      if (k < kappa_c()) {
        const auto rc = sandwich_report(OperatorKind::Chandrasekhar, ch, k, g, 6, tol);
        o.require(rc.passed(), "chandrasekhar above Bohr " + label(ch));
        rows += static_cast<int>(rc.rows.size());
      }
    }
  o.require(std::isfinite(c_hat) && c_hat > 0.0, "C_hat finite");
  o.note(f("%g rows, tol %.2e", rows, tol));
  o.note(f("empirical C_hat = max |lambda_n| (n+l)^2 / kappa^2 = %.4f", c_hat));
  return o;
}

Outcome criterion_4() {
  Outcome o;
  const auto reports = run_suite("all");
  for (const auto& r : reports) o.require(r.passed, r.name + " (" + r.detail + ")");
  o.require(default_test_functions().size() >= 5, "at least 5 test functions");
  VerifyOptions vo;
  const auto grid = build_grid(vo.p_min, vo.p_max, vo.nodes, GridScheme::LogGauss);
  double worst = INFINITY;
  for (const auto& pc : default_positivity_cases()) {
    const auto ch = detail::massless_channel(pc.kind, pc.index);
    const auto m = assemble(pc.kind, ch, channel_critical_coupling(pc.kind, ch), grid);
    worst = std::min(worst, min_eigenvalue(m.entries) / m.norm());
  }
  o.require(worst >= -1e-8, "min eigenvalue >= -1e-8 ||M||");
  o.note(f("%g checks passed", static_cast<double>(reports.size())));
  o.note(f("smallest min eig / ||M|| over critical massless assemblies %.2e", worst));
  for (const auto& r : reports)
    if (r.name.find("twisting") != std::string::npos || r.name.find("decomposition") != std::string::npos ||
        r.name.find("comparison") != std::string::npos)
      o.note(r.name + ": " + (r.detail.empty() ? "" : r.detail + ", ") + f("residual %.1e", r.max_residual));
  return o;
}

// shifts shared by criteria 5 and 7
std::map<double, ShiftResult> default_shifts;

Outcome criterion_5() {
  Outcome o;
  ShiftOptions opt;
  opt.threads = worker_threads();
  for (const double k : {0.1, 0.3, 0.6, 0.906}) {
    const auto r = total_shift(k, opt);
    default_shifts[k] = r;
    o.require(r.s_value >= -r.error_estimate, f("s(%g) >= -error", k));
    o.note(f("s(%g) = %.6f +- %.1e", k, r.s_value, r.error_estimate));
  }

  ShiftOptions small = opt;
  small.coarse_check = false;
  std::vector<double> ratios;
  for (const double k : {0.05, 0.1, 0.2}) ratios.push_back(total_shift(k, small).s_value / (k * k));
  const double spread = *std::max_element(ratios.begin(), ratios.end()) / *std::min_element(ratios.begin(), ratios.end());
  o.require(ratios.front() > 0.0 && spread < 2.0, "s / kappa^2 within factor 2");
  o.note(f("s/kappa^2 at 0.05, 0.1, 0.2: %.4f %.4f %.4f", ratios[0], ratios[1], ratios[2]));

  ShiftOptions full = opt;
  full.grid.nodes = 1500;
  const auto t0 = Clock::now();
  const auto base = total_shift(kappa_b(), full);
  const double dt = seconds_since(t0);

  // per-j traces times j^2 / kappa^4
  std::vector<double> cj;
  for (int tj = 9; tj <= 25; tj += 2) {
    double tr = 0.0;
    for (const auto& c : base.channels)
      if (c.channel.two_j == tj) tr += c.value;
    cj.push_back(tr * 0.25 * tj * tj / std::pow(kappa_b(), 4));
  }
  const double cmax = *std::max_element(cj.begin(), cj.end()), cmin = *std::min_element(cj.begin(), cj.end());
  o.require(cmin > 0.0 && std::isfinite(cmax) && cmax / cmin < 1.3, "channel j^2 decay");
  o.note(f("j^2 tr_j / kappa^4 for j in [9/2, 25/2]: %.4f .. %.4f", cmin, cmax));

  ShiftOptions fine = full;
  fine.grid.nodes = 3000;
  fine.coarse_check = false;
  const double s_fine = total_shift(kappa_b(), fine).s_value;
  ShiftOptions wide = full;
  wide.grid.range_scale = 2.0;
  wide.coarse_check = false;
  const double s_wide = total_shift(kappa_b(), wide).s_value;
  const double d_fine = std::abs(s_fine / base.s_value - 1), d_wide = std::abs(s_wide / base.s_value - 1);
  o.require(d_fine < 0.01, "N -> 3000");
  o.require(d_wide < 0.01, "p-range doubling");
  o.require(dt < 600.0, "full run under 10 min");
  o.note(f("s(kappa^B) = %.7f (N 1500), %.7f (N 3000), %.7f (range x2)", base.s_value, s_fine, s_wide));
  o.note(f("relative changes %.1e, %.1e; full run %.0f s", d_fine, d_wide, dt));
  o.note(f("%g threads", opt.threads));
  return o;
}

Outcome criterion_6() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto g = make_radial_grid();
  const auto m = tf_minimize(g);
  const auto s = tf_ode_solve();
  const double rel = std::abs(m.energy / s.energy - 1);
  double smin = INFINITY, smax = -INFINITY;
  for (const double z : {1.0, 2.0, 10.0}) {
    const double e = tf_minimize(g, 2000, {}, z).energy / std::pow(z, 7.0 / 3.0);
    smin = std::min(smin, e);
    smax = std::max(smax, e);
  }
  const double scale = std::abs(smax / smin - 1);
  double cusp = 0.0;
  for (const auto* sol : {&m, &s}) cusp = std::max(cusp, std::abs(1e-4 * tf_potential(*sol, 1e-4) - 1));
  const double dt = seconds_since(t0);
  o.require(rel < 2e-3, "routes agree");
  o.require(scale < 1e-3, "Z^{7/3} scaling");
  o.require(cusp < 1e-3, "r phi -> 1");
  o.require(dt < 30.0, "runtime");
  o.note(f("E_TF(1): minimize %.8f, ode %.8f, rel diff %.1e", m.energy, s.energy, rel));
  o.note(f("E/Z^{7/3} spread %.1e; |r phi(1e-4) - 1| = %.1e", scale, cusp));
  o.note(f("%.1f s", dt));
  return o;
}

Outcome criterion_7() {
  Outcome o;
  const double e1 = tf_energy_constant();
  for (const double z : {1.0, 10.0, 92.0}) {
    const auto e = scott_energy(z, kInfiniteSpeed, {});
    o.require(e.total == e1 * std::pow(z, 7.0 / 3.0) + 0.5 * z * z, f("c = inf at Z = %g", z));
  }
  const double c = 137.035999084;
  for (const auto& [k, r] : default_shifts) {
    const ShiftSource src = [&r](double) { return ShiftEstimate{r.s_value, r.error_estimate}; };
    const double z = k * c;
    const auto e = scott_energy(z, z / k, src);
    o.require(e.scott_term <= 0.5 * z * z + z * z * e.s_error, f("scott term bound at kappa %g", k));
  }
  const ShiftSource dummy = [](double) { return ShiftEstimate{1.0, 0.0}; };
  bool at = true, above = false;
  try {
    scott_energy(100.0, 100.0 / kappa_b(), dummy);
  } catch (const SupercriticalError&) {
    at = false;
  }
  try {
    scott_energy(100.0, std::nextafter(100.0 / kappa_b(), 0.0) * (1 - 1e-14), dummy);
  } catch (const SupercriticalError&) {
    above = true;
  }
  o.require(at && above, "admissibility gate at kappa^B");

  // s_B - s_C on two grids
  std::string order;
  bool consistent = true;
  for (const double k : {0.3, 0.6}) {
    int sign_prev = 0;
    std::string line = f("kappa %g:", k);
    for (const int n : {800, 1200}) {
      ShiftOptions ob;
      ob.grid.nodes = n;
      ob.coarse_check = false;
      ob.threads = worker_threads();
      ShiftOptions oc = ob;
      oc.relativistic = OperatorKind::Chandrasekhar;
      const double sb = n == 1200 ? default_shifts.at(k).s_value : total_shift(k, ob).s_value;
      const double sc = total_shift(k, oc).s_value;
      const int sign = sb > sc ? 1 : (sb < sc ? -1 : 0);
      if (sign_prev != 0 && sign != sign_prev) consistent = false;
      sign_prev = sign;
      line += f(" N %g: s_B %.6f s_C %.6f", n, sb, sc);
    }
    order += line + (sign_prev < 0 ? " (s_B < s_C)" : " (s_B > s_C)") + "; ";
  }
  order += "kappa 0.906: s_C undefined, Chandrasekhar supercritical above 2/pi";
  o.require(consistent, "ordering stable under refinement");
  o.note(order);
  return o;
}

Outcome criterion_8() {
  Outcome o;
  auto run = [](std::vector<std::string> args) {
    args.insert(args.begin(), "scottshift");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return std::make_pair(code, out.str());
  };
  const std::vector<std::string> shift = {"shift", "--kappa", "0.3", "0.8", "--two-j-max", "7", "--n-levels",
                                          "8", "--nodes", "500", "--format", "json", "--no-cache"};
  auto with_threads = [&](int t) {
    auto a = shift;
    a.push_back("--threads");
    a.push_back(std::to_string(t));
    return run(a);
  };
  const auto a = with_threads(1), b = with_threads(1), c = with_threads(4);
  o.require(a.first == 0 && a.second == b.second, "repeat run");
  o.require(a.second == c.second, "thread count");
  const auto v1 = run({"verify", "--json"}), v2 = run({"verify", "--json"});
  o.require(v1.first == 0 && v1.second == v2.second, "verify json");
  const auto t1 = run({"tf", "--format", "json"}), t2 = run({"tf", "--format", "json"});
  o.require(t1.first == 0 && t1.second == t2.second, "tf json");
  const auto s1 = run({"scott", "--Z", "20", "80", "--c", "inf", "--format", "json"});
  const auto s2 = run({"scott", "--Z", "20", "80", "--c", "inf", "--format", "json"});
  o.require(s1.first == 0 && s1.second == s2.second, "scott json");
  o.note(f("shift JSON %g bytes identical for 1 and 4 threads; verify, tf, scott JSON identical on repeat",
           static_cast<double>(a.second.size())));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4},
      {5, criterion_5}, {6, criterion_6}, {7, criterion_7}, {8, criterion_8}};
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("criterion %d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
