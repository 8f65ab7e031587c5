#pragma once

// Command-line front end. run() parses argv, dispatches to one subcommand and
// maps failures onto exit codes:
//   0 success, 1 computation error, 2 usage or domain error, 3 failed check.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scottshift/channels.hpp"
#include "scottshift/discretize.hpp"
#include "scottshift/error.hpp"
#include "scottshift/grid.hpp"
#include "scottshift/io.hpp"
#include "scottshift/scott.hpp"
#include "scottshift/shift.hpp"
#include "scottshift/spectra.hpp"
#include "scottshift/thomasfermi.hpp"
#include "scottshift/verify.hpp"

namespace scottshift::cli {

using io::json;

enum ExitCode { kOk = 0, kComputation = 1, kUsage = 2, kCheckFailed = 3 };

enum class Format { Pretty, Json, Csv };

inline Format parse_format(const std::string& s) {
  if (s == "pretty") return Format::Pretty;
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw UsageError("unknown format '" + s + "'");
}

inline const char* to_string(Format f) {
  return f == Format::Pretty ? "pretty" : f == Format::Json ? "json" : "csv";
}

struct RunConfig {
  std::string subcommand;
  std::string format = "pretty";
  std::uint64_t seed = kDefaultSeed;
  std::string cache_dir;  // empty: default location
  bool no_cache = false;
  int threads = 1;

  // grid
  int nodes = 1200;
  std::string scheme = "log-gauss";
  double p_min = 0.0;
  double p_max = 0.0;
  double range_scale = 1.0;

  // critical
  int max_index = 10;

  // levels
  std::string kind = "br";
  double kappa = 0.0;
  int two_j = 1;
  int l = 0;
  int n = 5;
  std::string dump;

  // shift, scott
  std::vector<double> kappas;
  std::string curve;
  int two_j_max = 25;
  int n_levels = 12;
  std::string model = "br";
  double mu = 0.0;
  bool exact_schroedinger = false;
  bool no_coarse_check = false;

  // tf
  std::string route = "both";
  int tf_nodes = 400;
  double r_min = 1e-5;
  double r_max = 50.0;
  std::string profile;

  // scott
  std::vector<double> zs;
  std::string c = "137.035999084";

  // verify
  std::string suite = "all";
  bool json_report = false;
  int verify_nodes = 400;
};

inline GridPolicy grid_policy(const RunConfig& rc) {
  GridPolicy g;
  g.nodes = rc.nodes;
  g.scheme = parse_scheme(rc.scheme);
  g.p_min = rc.p_min;
  g.p_max = rc.p_max;
  g.range_scale = rc.range_scale;
  return g;
}

inline ShiftOptions shift_options(const RunConfig& rc) {
  ShiftOptions o;
  o.two_j_max = rc.two_j_max;
  o.n_levels = rc.n_levels;
  o.grid = grid_policy(rc);
  o.relativistic = parse_kind(rc.model);
  if (o.relativistic != OperatorKind::BrownRavenhall && o.relativistic != OperatorKind::Chandrasekhar)
    throw UsageError("--model must be br or chandrasekhar");
  o.mu = rc.mu;
  o.exact_schroedinger = rc.exact_schroedinger;
  o.coarse_check = !rc.no_coarse_check;
  o.threads = rc.threads;
  return o;
}

inline double parse_speed(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Inf") return kInfiniteSpeed;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("--c expects a positive number or 'inf', got '" + s + "'");
  }
  if (used != s.size() || !(v > 0.0)) throw UsageError("--c expects a positive number or 'inf', got '" + s + "'");
  return v;
}

// "a:b:steps"
inline std::vector<double> parse_curve(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : spec.find(':', c1 + 1);
  if (c2 == std::string::npos) throw UsageError("--curve expects a:b:steps, got '" + spec + "'");
  try {
    std::size_t u = 0;
    const double a = std::stod(spec.substr(0, c1));
    const double b = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const std::string st = spec.substr(c2 + 1);
    const int steps = std::stoi(st, &u);
    if (u != st.size()) throw UsageError("--curve: steps must be an integer");
    return curve_points(a, b, steps);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  } catch (const std::logic_error&) {
    throw UsageError("--curve expects a:b:steps, got '" + spec + "'");
  }
}

// Echo of the settings that determine the output of the subcommand.
inline json canonical(const RunConfig& rc) {
  json j{{"subcommand", rc.subcommand}, {"format", rc.format}};
  auto grid = [&] {
    return json{{"nodes", rc.nodes},
                {"scheme", rc.scheme},
                {"p_min", rc.p_min > 0 ? io::num(rc.p_min) : json("auto")},
                {"p_max", rc.p_max > 0 ? io::num(rc.p_max) : json("auto")},
                {"range_scale", io::num(rc.range_scale)}};
  };
  const auto& s = rc.subcommand;
  if (s == "critical") j["max_index"] = rc.max_index;
  if (s == "levels") {
    j["kind"] = rc.kind;
    j["kappa"] = io::num(rc.kappa);
    j["two_j"] = rc.two_j;
    j["l"] = rc.l;
    j["n"] = rc.n;
    j["grid"] = grid();
  }
  if (s == "shift" || s == "scott") {
    j["two_j_max"] = rc.two_j_max;
    j["n_levels"] = rc.n_levels;
    j["model"] = rc.model;
    j["mu"] = io::num(rc.mu);
    j["exact_schroedinger"] = rc.exact_schroedinger;
    j["coarse_check"] = !rc.no_coarse_check;
    j["grid"] = grid();
    if (!rc.curve.empty()) j["curve"] = rc.curve;
  }
  if (s == "shift") {
    json k = json::array();
    for (double x : rc.kappas) k.push_back(io::num(x));
    j["kappa"] = k;
  }
  if (s == "tf") {
    j["route"] = rc.route;
    j["radial_grid"] = {{"r_min", io::num(rc.r_min)}, {"r_max", io::num(rc.r_max)}, {"nodes", rc.tf_nodes}};
  }
  if (s == "scott") {
    json z = json::array();
    for (double x : rc.zs) z.push_back(io::num(x));
    j["Z"] = z;
    j["c"] = io::num(parse_speed(rc.c));
  }
  if (s == "verify") {
    j["suite"] = rc.suite;
    j["seed"] = rc.seed;
    j["nodes"] = rc.verify_nodes;
  }
  return j;
}

inline std::optional<io::ShiftCache> make_cache(const RunConfig& rc) {
  if (rc.no_cache) return std::nullopt;
  return io::ShiftCache(rc.cache_dir.empty() ? io::default_cache_dir() : std::filesystem::path(rc.cache_dir));
}

inline void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

inline int cmd_critical(const RunConfig& rc, std::ostream& out) {
  if (rc.max_index < 0) throw UsageError("--max-index must be nonnegative");
  const Format f = parse_format(rc.format);
  struct Row {
    std::string kind, index;
    double value;
  };
  std::vector<Row> rows;
  for (int l = 0; l <= rc.max_index; ++l) rows.push_back({"chandrasekhar", "l=" + std::to_string(l), critical_coupling_c(l)});
  for (int k = 0; k <= rc.max_index; ++k) {
    const int tj = 2 * k + 1;
    rows.push_back({"br", "j=" + std::to_string(tj) + "/2", critical_coupling_b(tj)});
  }
  if (f == Format::Json) {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back({{"kind", r.kind}, {"index", r.index}, {"value", io::num(r.value)}});
    emit_json(out, {{"config", canonical(rc)},
                    {"critical", arr},
                    {"kappa_B", io::num(kappa_b())},
                    {"kappa_C", io::num(kappa_c())}});
  } else if (f == Format::Csv) {
    io::CsvWriter csv(out, {"kind", "index", "value"});
    for (const auto& r : rows) csv.row({r.kind, r.index, io::fmt(r.value)});
  } else {
    out << "channel critical couplings\n";
    for (const auto& r : rows) {
      const std::string name = r.kind == "br" ? "kappa^B_" + r.index.substr(2) : "kappa^C_" + r.index.substr(2);
      out << "  " << std::left << std::setw(16) << name << io::fmt(r.value) << '\n';
    }
    out << "global: kappa^B = kappa^B_1/2 = " << io::fmt(kappa_b()) << ", kappa^C = kappa^C_0 = " << io::fmt(kappa_c())
        << '\n';
  }
  return kOk;
}

inline int cmd_levels(const RunConfig& rc, std::ostream& out) {
  const Format f = parse_format(rc.format);
  const OperatorKind kind = parse_kind(rc.kind);
  const AngularChannel ch(rc.two_j, rc.l);
  if (rc.n < 1) throw UsageError("--n must be positive");
  if (!(rc.kappa > 0.0)) throw UsageError("--kappa must be positive");
  const auto grid = std::make_shared<const MomentumGrid>(grid_policy(rc).grid_for(rc.kappa, rc.l, rc.n));
  const auto m = assemble(kind, ch, rc.kappa, grid);
  if (!rc.dump.empty()) write_matrix_dump(rc.dump, m);
  const auto spec = negative_spectrum(m);
  const int shown = std::min<int>(rc.n, static_cast<int>(spec.count()));
  auto reference = [&](int n) -> double {
    switch (kind) {
      case OperatorKind::Schroedinger:
      case OperatorKind::Chandrasekhar: return schroedinger_level(n, rc.l, rc.kappa);
      case OperatorKind::BrownRavenhall:
        if (rc.kappa < 1.0) return dirac_channel_level(n, ch, rc.kappa) - 1.0;
        return std::numeric_limits<double>::quiet_NaN();
      default: return std::numeric_limits<double>::quiet_NaN();
    }
  };
  const char* ref_name = kind == OperatorKind::BrownRavenhall ? "dirac_minus_1"
                         : is_massless(kind)                  ? "none"
                                                              : "bohr";
  if (f == Format::Json) {
    json lv = json::array();
    for (int n = 1; n <= shown; ++n)
      lv.push_back({{"n", n},
                    {"eigenvalue", io::num(spec.eigenvalues[static_cast<std::size_t>(n - 1)])},
                    {"reference", io::num(reference(n))}});
    emit_json(out, {{"config", canonical(rc)},
                    {"channel", {{"two_j", ch.two_j}, {"l", ch.l}}},
                    {"dimension", m.dimension()},
                    {"p_min", io::num(grid->p_min)},
                    {"p_max", io::num(grid->p_max)},
                    {"floor", io::num(spec.floor)},
                    {"negative_count", spec.count()},
                    {"reference_kind", ref_name},
                    {"levels", lv}});
  } else if (f == Format::Csv) {
    io::CsvWriter csv(out, {"n", "eigenvalue", "reference"});
    for (int n = 1; n <= shown; ++n)
      csv.row({std::to_string(n), io::fmt(spec.eigenvalues[static_cast<std::size_t>(n - 1)]), io::fmt(reference(n))});
  } else {
    out << to_string(kind) << " channel " << label(ch) << " kappa " << io::fmt(rc.kappa) << ", N = " << m.dimension()
        << " on [" << io::fmt(grid->p_min) << ", " << io::fmt(grid->p_max) << "], " << spec.count()
        << " eigenvalues below -" << io::fmt(spec.floor) << '\n';
    out << "  n  eigenvalue           " << ref_name << '\n';
    for (int n = 1; n <= shown; ++n)
      out << std::setw(3) << n << "  " << std::left << std::setw(20)
          << io::fmt(spec.eigenvalues[static_cast<std::size_t>(n - 1)]) << ' ' << io::fmt(reference(n)) << std::right
          << '\n';
  }
  return kOk;
}

inline int cmd_shift(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Format f = parse_format(rc.format);
  const auto opt = shift_options(rc);
  std::vector<double> kappas = rc.kappas;
  const bool is_curve = !rc.curve.empty();
  if (is_curve) {
    const auto c = parse_curve(rc.curve);
    kappas.insert(kappas.end(), c.begin(), c.end());
  }
  if (kappas.empty()) throw UsageError("shift needs --kappa or --curve");
  const auto cache = make_cache(rc);

  struct Entry {
    double kappa;
    std::optional<ShiftResult> result;
    std::string message;
  };
  std::vector<Entry> entries;
  for (const double k : kappas) {
    Entry e{k, std::nullopt, {}};
    if (is_curve) {
      // per-point failures are recorded, as in shift_curve
      try {
        e.result = io::cached_total_shift(k, opt, cache ? &*cache : nullptr);
      } catch (const Error& ex) {
        e.message = ex.what();
      }
    } else {
      e.result = io::cached_total_shift(k, opt, cache ? &*cache : nullptr);
    }
    if (e.result)
      for (const auto& w : e.result->warnings) err << "warning: kappa " << io::fmt(k) << ": " << w << '\n';
    if (!e.message.empty()) err << "warning: kappa " << io::fmt(k) << ": " << e.message << '\n';
    entries.push_back(std::move(e));
  }

  if (f == Format::Json) {
    json res = json::array();
    for (const auto& e : entries) {
      if (e.result) {
        res.push_back(io::to_json(*e.result, opt));
      } else {
        res.push_back({{"kappa", io::num(e.kappa)}, {"error_message", e.message}});
      }
    }
    emit_json(out, {{"config", canonical(rc)}, {"results", res}});
  } else if (f == Format::Csv) {
    io::CsvWriter csv(out, {"kappa", "s", "error", "channel_tail", "c_hat", "ok", "message"});
    for (const auto& e : entries) {
      if (e.result)
        csv.row({io::fmt(e.kappa), io::fmt(e.result->s_value), io::fmt(e.result->error_estimate),
                 io::fmt(e.result->channel_tail), io::fmt(e.result->c_hat), "1", ""});
      else
        csv.row({io::fmt(e.kappa), "", "", "", "", "0", e.message});
    }
  } else {
    for (const auto& e : entries) {
      if (!e.result) {
        out << "kappa " << io::fmt(e.kappa) << ": failed: " << e.message << '\n';
        continue;
      }
      const auto& r = *e.result;
      out << "kappa " << io::fmt(r.kappa) << "  s = " << io::fmt(r.s_value) << " +- " << io::fmt(r.error_estimate)
          << "  (" << to_string(r.relativistic) << ", j_max " << r.two_j_max << "/2, " << r.n_levels
          << " levels)\n";
      if (entries.size() == 1) {
        out << "  channel      value            levels  level tail\n";
        for (const auto& c : r.channels)
          out << "  " << std::left << std::setw(12) << label(c.channel) << std::setw(17) << io::fmt(c.value)
              << std::setw(8) << c.levels_used << io::fmt(c.level_tail) << std::right << '\n';
        out << "  channel tail " << io::fmt(r.channel_tail) << ", C_hat " << io::fmt(r.c_hat) << ", coarse-grid delta "
            << io::fmt(r.grid_delta) << '\n';
      }
    }
  }
  return kOk;
}

inline int cmd_tf(const RunConfig& rc, std::ostream& out) {
  const Format f = parse_format(rc.format);
  if (rc.route != "minimize" && rc.route != "ode" && rc.route != "both")
    throw UsageError("--route must be minimize, ode or both");
  const auto grid = make_radial_grid(rc.r_min, rc.r_max, rc.tf_nodes);
  std::vector<TFSolution> sols;
  if (rc.route != "ode") sols.push_back(tf_minimize(grid));
  if (rc.route != "minimize") sols.push_back(tf_ode_solve(1e-10, grid));
  const TFSolution& ref = sols.back();  // the ode route when present

  if (!rc.profile.empty()) {
    std::ofstream p(rc.profile);
    if (!p) throw Error("cannot open '" + rc.profile + "' for writing");
    io::CsvWriter csv(p, {"route", "r", "rho", "phi"});
    for (const auto& s : sols)
      for (std::size_t i = 0; i < s.density.r_nodes.size(); ++i)
        csv.row({std::string(to_string(s.solver_tag)), io::fmt(s.density.r_nodes[i]), io::fmt(s.density.values[i]),
                 io::fmt(s.potential[i])});
  }
  const double rel = sols.size() == 2 ? sols[0].energy / sols[1].energy - 1.0 : 0.0;
  if (f == Format::Json) {
    json routes = json::array();
    for (const auto& s : sols)
      routes.push_back({{"route", std::string(to_string(s.solver_tag))},
                        {"energy", io::num(s.energy)},
                        {"total_charge", io::num(s.density.total_charge)},
                        {"virial_ratio", io::num(s.terms.virial_ratio())},
                        {"iterations", s.iterations}});
    json j{{"config", canonical(rc)},
           {"E_TF_1", io::num(ref.energy)},
           {"slope", io::num(ref.slope)},
           {"grid", {{"r_min", io::num(rc.r_min)}, {"r_max", io::num(rc.r_max)}, {"nodes", rc.tf_nodes}}},
           {"routes", routes}};
    if (sols.size() == 2) j["relative_difference"] = io::num(rel);
    emit_json(out, j);
  } else if (f == Format::Csv) {
    io::CsvWriter csv(out, {"route", "energy", "slope", "total_charge", "virial_ratio", "iterations"});
    for (const auto& s : sols)
      csv.row({std::string(to_string(s.solver_tag)), io::fmt(s.energy), io::fmt(s.slope),
               io::fmt(s.density.total_charge), io::fmt(s.terms.virial_ratio()), std::to_string(s.iterations)});
  } else {
    for (const auto& s : sols) {
      out << std::left << std::setw(9) << to_string(s.solver_tag) << std::right << " E_TF(1) = " << io::fmt(s.energy)
          << "  charge " << io::fmt(s.density.total_charge) << "  virial " << io::fmt(s.terms.virial_ratio());
      if (s.solver_tag == TFSolver::Ode) out << "  chi'(0) = " << io::fmt(s.slope);
      if (s.solver_tag == TFSolver::Minimize) out << "  iterations " << s.iterations;
      out << '\n';
    }
    if (sols.size() == 2) out << "relative difference " << io::fmt(rel) << '\n';
  }
  return kOk;
}

inline int cmd_scott(const RunConfig& rc, std::ostream& out) {
  const Format f = parse_format(rc.format);
  if (rc.zs.empty()) throw UsageError("scott needs --Z");
  const double c = parse_speed(rc.c);
  const auto opt = shift_options(rc);
  const auto cache = make_cache(rc);
  const io::ShiftCache* cp = cache ? &*cache : nullptr;
  ShiftSource source;
  if (!rc.curve.empty()) {
    std::vector<CurvePoint> pts;
    for (const double k : parse_curve(rc.curve)) {
      const auto r = io::cached_total_shift(k, opt, cp);
      pts.push_back({k, true, r.s_value, r.error_estimate, {}});
    }
    source = cached_shift(std::make_shared<const ShiftInterpolant>(pts));
  } else {
    source = [opt, cp](double kappa) {
      const auto r = io::cached_total_shift(kappa, opt, cp);
      return ShiftEstimate{r.s_value, r.error_estimate};
    };
  }
  const auto rows = energy_table(rc.zs, fixed_speed(c), source, opt.relativistic);
  if (f == Format::Json) {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"Z", io::num(r.Z)},
                     {"c", io::num(r.c)},
                     {"kappa", io::num(r.kappa)},
                     {"e_tf", io::num(r.e_tf)},
                     {"scott_term", io::num(r.scott_term)},
                     {"total", io::num(r.total)},
                     {"s", io::num(r.s_used)},
                     {"s_error", io::num(r.s_error)}});
    emit_json(out, {{"config", canonical(rc)}, {"E_TF_1", io::num(tf_energy_constant())}, {"rows", arr}});
  } else if (f == Format::Csv) {
    io::CsvWriter csv(out, {"Z", "c", "kappa", "e_tf", "scott_term", "total", "s", "s_error"});
    for (const auto& r : rows)
      csv.row({io::fmt(r.Z), io::fmt(r.c), io::fmt(r.kappa), io::fmt(r.e_tf), io::fmt(r.scott_term), io::fmt(r.total),
               io::fmt(r.s_used), io::fmt(r.s_error)});
  } else {
    out << "E_TF(1) = " << io::fmt(tf_energy_constant()) << ", model " << rc.model << '\n';
    out << std::left << std::setw(8) << "Z" << std::setw(16) << "c" << std::setw(16) << "kappa" << std::setw(20)
        << "E_TF" << std::setw(20) << "Scott term" << std::setw(20) << "total" << std::setw(16) << "s"
        << "s_err\n";
    for (const auto& r : rows)
      out << std::setw(8) << io::fmt(r.Z) << std::setw(16) << io::fmt(r.c) << std::setw(16) << io::fmt(r.kappa)
          << std::setw(20) << io::fmt(r.e_tf) << std::setw(20) << io::fmt(r.scott_term) << std::setw(20)
          << io::fmt(r.total) << std::setw(16) << io::fmt(r.s_used) << io::fmt(r.s_error) << '\n';
    out << std::right;
  }
  return kOk;
}

inline int cmd_verify(const RunConfig& rc, std::ostream& out) {
  const Format f = rc.json_report ? Format::Json : parse_format(rc.format);
  VerifyOptions vo;
  vo.seed = rc.seed;
  vo.nodes = rc.verify_nodes;
  const auto reports = run_suite(rc.suite, vo);
  bool all = true;
  for (const auto& r : reports) all = all && r.passed;
  if (f == Format::Json) {
    json arr = json::array();
    for (const auto& r : reports)
      arr.push_back({{"name", r.name},
                     {"samples", r.samples},
                     {"max_residual", io::num(r.max_residual)},
                     {"threshold", io::num(r.threshold)},
                     {"passed", r.passed},
                     {"detail", r.detail}});
    emit_json(out, {{"config", canonical(rc)}, {"checks", arr}, {"passed", all}});
  } else if (f == Format::Csv) {
    io::CsvWriter csv(out, {"name", "samples", "max_residual", "threshold", "passed", "detail"});
    for (const auto& r : reports)
      csv.row({r.name, std::to_string(r.samples), io::fmt(r.max_residual), io::fmt(r.threshold),
               r.passed ? "1" : "0", r.detail});
  } else {
    for (const auto& r : reports)
      out << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(44) << r.name << std::right
          << "residual " << std::setw(10) << io::fmt(r.max_residual) << "  threshold " << std::setw(7)
          << io::fmt(r.threshold) << "  " << r.detail << '\n';
    out << (all ? "all checks passed" : "some checks FAILED") << '\n';
  }
  return all ? kOk : kCheckFailed;
}

inline void add_format(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--format", rc.format, "Output format")
      ->check(CLI::IsMember({"pretty", "json", "csv"}))
      ->capture_default_str();
}

inline void add_grid(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--nodes", rc.nodes, "Momentum nodes per channel")->check(CLI::Range(16, 100000))->capture_default_str();
  sub->add_option("--scheme", rc.scheme, "Momentum grid scheme")
      ->check(CLI::IsMember({"log-uniform", "log-gauss"}))
      ->capture_default_str();
  sub->add_option("--p-min", rc.p_min, "Lower momentum cutoff (0: kappa / (2000 n_levels))")->check(CLI::NonNegativeNumber);
  sub->add_option("--p-max", rc.p_max, "Upper momentum cutoff (0: 50 max(1, kappa) (l + 1))")->check(CLI::NonNegativeNumber);
  sub->add_option("--range-scale", rc.range_scale, "Widen the default momentum range by this factor")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

inline void add_shift_options(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--two-j-max", rc.two_j_max, "Largest 2j summed explicitly (odd, >= 5)")->capture_default_str();
  sub->add_option("--n-levels", rc.n_levels, "Bound states resolved per channel")
      ->check(CLI::Range(4, 1000))
      ->capture_default_str();
  sub->add_option("--model", rc.model, "Relativistic operator")
      ->check(CLI::IsMember({"br", "chandrasekhar"}))
      ->capture_default_str();
  sub->add_option("--mu", rc.mu, "Soft cutoff mu >= 0 on the levels")->check(CLI::NonNegativeNumber);
  sub->add_flag("--exact-schroedinger", rc.exact_schroedinger, "Subtract the Bohr levels instead of the discretized ones");
  sub->add_flag("--no-coarse-check", rc.no_coarse_check, "Skip the half-grid rerun in the error estimate");
  sub->add_option("--threads", rc.threads, "Worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  sub->add_option("--cache-dir", rc.cache_dir, "Result cache directory (default: $SCOTTSHIFT_CACHE)");
  sub->add_flag("--no-cache", rc.no_cache, "Do not read or write cached results");
  add_grid(sub, rc);
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig rc;
  CLI::App app{"Relativistic spectral shift, Thomas-Fermi and Scott energies", "scottshift"};
  app.require_subcommand(1);

  auto* critical = app.add_subcommand("critical", "Critical couplings of the massless channels");
  critical->add_option("--max-index", rc.max_index, "Largest l (and k with 2j = 2k + 1) listed")->capture_default_str();
  add_format(critical, rc);

  auto* levels = app.add_subcommand("levels", "Bound states of one discretized channel operator");
  levels->add_option("--kind", rc.kind, "Operator kind")
      ->check(CLI::IsMember({"br", "chandrasekhar", "schroedinger", "br0", "chandrasekhar0"}))
      ->capture_default_str();
  levels->add_option("--kappa", rc.kappa, "Coupling Z/c")->required();
  levels->add_option("--two-j", rc.two_j, "2j (odd)")->capture_default_str();
  levels->add_option("--l", rc.l, "Orbital angular momentum l = j +- 1/2")->capture_default_str();
  levels->add_option("--n", rc.n, "Number of levels to print")->capture_default_str();
  levels->add_option("--dump", rc.dump, "Write the assembled matrix to this binary file");
  add_grid(levels, rc);
  add_format(levels, rc);

  auto* shift = app.add_subcommand("shift", "Spectral shift s(kappa)");
  shift->add_option("--kappa", rc.kappas, "Coupling(s) Z/c");
  shift->add_option("--curve", rc.curve, "Evaluate on a:b:steps");
  add_shift_options(shift, rc);
  add_format(shift, rc);

  auto* tf = app.add_subcommand("tf", "Thomas-Fermi energy and profile for Z = 1");
  tf->add_option("--route", rc.route, "Solver route")
      ->check(CLI::IsMember({"minimize", "ode", "both"}))
      ->capture_default_str();
  tf->add_option("--nodes", rc.tf_nodes, "Radial nodes (>= 400)")->capture_default_str();
  tf->add_option("--r-min", rc.r_min, "Smallest radius")->capture_default_str();
  tf->add_option("--r-max", rc.r_max, "Largest radius")->capture_default_str();
  tf->add_option("--profile", rc.profile, "Write r, rho, phi to this CSV file");
  add_format(tf, rc);

  auto* scott = app.add_subcommand("scott", "Scott-corrected ground-state energies");
  scott->add_option("--Z", rc.zs, "Nuclear charge(s)")->required();
  scott->add_option("--c", rc.c, "Speed of light in atomic units, or 'inf'")->capture_default_str();
  scott->add_option("--curve", rc.curve, "Interpolate s from a cached curve a:b:steps");
  add_shift_options(scott, rc);
  add_format(scott, rc);

  auto* verify = app.add_subcommand("verify", "Identity and inequality checks");
  verify->add_option("--suite", rc.suite, "Suite name")->check(CLI::IsMember(suite_names()))->capture_default_str();
  verify->add_option("--seed", rc.seed, "Random seed")->capture_default_str();
  verify->add_option("--nodes", rc.verify_nodes, "Momentum nodes of the check grid")
      ->check(CLI::Range(16, 20000))
      ->capture_default_str();
  verify->add_flag("--json", rc.json_report, "JSON report (same as --format json)");
  add_format(verify, rc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    for (auto* sub : app.get_subcommands())
      if (sub->parsed()) out << sub->help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  rc.subcommand = app.get_subcommands().front()->get_name();
  try {
    if (rc.subcommand == "critical") return cmd_critical(rc, out);
    if (rc.subcommand == "levels") return cmd_levels(rc, out);
    if (rc.subcommand == "shift") return cmd_shift(rc, out, err);
    if (rc.subcommand == "tf") return cmd_tf(rc, out);
    if (rc.subcommand == "scott") return cmd_scott(rc, out);
    if (rc.subcommand == "verify") return cmd_verify(rc, out);
    throw UsageError("unknown subcommand");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputation;
  }
}

}  // namespace scottshift::cli
