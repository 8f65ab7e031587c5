#pragma once

// Machine-readable output (JSON, CSV) and the on-disk cache of shift results.

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "scottshift/error.hpp"
#include "scottshift/grid.hpp"
#include "scottshift/shift.hpp"

namespace scottshift::io {

using json = nlohmann::json;

inline constexpr const char* kVersionTag = "scottshift-1";

// Values are rounded to 12 significant digits before they reach the JSON
// writer, which then prints the shortest form. Non-finite values become the
// strings "inf", "-inf", "nan".
inline json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// Comma-separated rows with a header, '\n' line endings.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out), width_(header.size()) {
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw Error("csv: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << escape(cells[i]);
    }
    out_ << '\n';
  }

 private:
  static std::string escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }

  std::ostream& out_;
  std::size_t width_;
};

inline json grid_json(const GridPolicy& g) {
  return {{"nodes", g.nodes},
          {"scheme", std::string(to_string(g.scheme))},
          {"p_min", g.p_min > 0 ? num(g.p_min) : json("auto")},
          {"p_max", g.p_max > 0 ? num(g.p_max) : json("auto")},
          {"range_scale", num(g.range_scale)}};
}

// Output form, rounded.
inline json to_json(const ShiftResult& r, const ShiftOptions& opt) {
  json channels = json::array();
  for (const auto& c : r.channels)
    channels.push_back({{"two_j", c.channel.two_j},
                        {"l", c.channel.l},
                        {"value", num(c.value)},
                        {"n_levels", c.levels_used},
                        {"level_tail", num(c.level_tail)},
                        {"tail_exponent", num(c.fit.exponent)}});
  return {{"kappa", num(r.kappa)},
          {"s", num(r.s_value)},
          {"error", num(r.error_estimate)},
          {"model", std::string(to_string(r.relativistic))},
          {"two_j_max", r.two_j_max},
          {"n_levels", r.n_levels},
          {"channels", channels},
          {"channel_tail", num(r.channel_tail)},
          {"c_hat", num(r.c_hat)},
          {"grid_delta", num(r.grid_delta)},
          {"grid", grid_json(opt.grid)},
          {"warnings", r.warnings}};
}

// Full-precision form for the cache.
inline json to_cache_json(const ShiftResult& r) {
  json channels = json::array();
  for (const auto& c : r.channels) {
    json levels = json::array();
    for (const auto& lv : c.levels) levels.push_back({lv.n, lv.schroedinger, lv.relativistic, lv.delta});
    channels.push_back({{"two_j", c.channel.two_j},
                        {"l", c.channel.l},
                        {"levels_used", c.levels_used},
                        {"levels", levels},
                        {"raw_sum", c.raw_sum},
                        {"level_tail", c.level_tail},
                        {"fit", {c.fit.amplitude, c.fit.exponent}},
                        {"tail_spread", c.tail_spread},
                        {"value", c.value}});
  }
  return {{"kappa", r.kappa},
          {"two_j_max", r.two_j_max},
          {"n_levels", r.n_levels},
          {"relativistic", std::string(to_string(r.relativistic))},
          {"channels", channels},
          {"channel_tail", r.channel_tail},
          {"c_hat", r.c_hat},
          {"s_value", r.s_value},
          {"error_estimate", r.error_estimate},
          {"grid_delta", r.grid_delta},
          {"warnings", r.warnings}};
}

inline ShiftResult from_cache_json(const json& j) {
  ShiftResult r;
  r.kappa = j.at("kappa").get<double>();
  r.two_j_max = j.at("two_j_max").get<int>();
  r.n_levels = j.at("n_levels").get<int>();
  r.relativistic = parse_kind(j.at("relativistic").get<std::string>());
  for (const auto& c : j.at("channels")) {
    ChannelShift cs;
    cs.channel = AngularChannel(c.at("two_j").get<int>(), c.at("l").get<int>());
    cs.levels_used = c.at("levels_used").get<int>();
    for (const auto& lv : c.at("levels"))
      cs.levels.push_back({lv.at(0).get<int>(), lv.at(1).get<double>(), lv.at(2).get<double>(), lv.at(3).get<double>()});
    cs.raw_sum = c.at("raw_sum").get<double>();
    cs.level_tail = c.at("level_tail").get<double>();
    cs.fit = {c.at("fit").at(0).get<double>(), c.at("fit").at(1).get<double>()};
    cs.tail_spread = c.at("tail_spread").get<double>();
    cs.value = c.at("value").get<double>();
    r.channels.push_back(std::move(cs));
  }
  r.channel_tail = j.at("channel_tail").get<double>();
  r.c_hat = j.at("c_hat").get<double>();
  r.s_value = j.at("s_value").get<double>();
  r.error_estimate = j.at("error_estimate").get<double>();
  r.grid_delta = j.at("grid_delta").get<double>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Everything a cached shift result depends on. Thread count is excluded;
// results do not depend on it.
inline json shift_key(double kappa, const ShiftOptions& opt) {
  char k[32];
  std::snprintf(k, sizeof k, "%.17g", kappa);
  const auto& g = opt.grid;
  return {{"version", kVersionTag},
          {"kappa", k},
          {"two_j_max", opt.two_j_max},
          {"n_levels", opt.n_levels},
          {"grid",
           {{"nodes", g.nodes},
            {"scheme", std::string(to_string(g.scheme))},
            {"p_min", g.p_min},
            {"p_max", g.p_max},
            {"range_scale", g.range_scale}}},
          {"model", std::string(to_string(opt.relativistic))},
          {"mu", opt.mu},
          {"exact_schroedinger", opt.exact_schroedinger},
          {"coarse_check", opt.coarse_check}};
}

// SCOTTSHIFT_CACHE, else $XDG_CACHE_HOME/scottshift, else ~/.cache/scottshift.
inline std::filesystem::path default_cache_dir() {
  if (const char* e = std::getenv("SCOTTSHIFT_CACHE"); e && *e) return e;
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::filesystem::path(x) / "scottshift";
  if (const char* h = std::getenv("HOME"); h && *h) return std::filesystem::path(h) / ".cache" / "scottshift";
  return ".scottshift-cache";
}

class ShiftCache {
 public:
  explicit ShiftCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }

  std::filesystem::path path_for(const json& key) const {
    char name[40];
    std::snprintf(name, sizeof name, "shift-%016llx.json", static_cast<unsigned long long>(fnv1a(key.dump())));
    return dir_ / name;
  }

  // The stored key must match exactly; a hash collision reads as a miss.
  std::optional<ShiftResult> load(double kappa, const ShiftOptions& opt) const {
    const auto key = shift_key(kappa, opt);
    std::ifstream in(path_for(key));
    if (!in) return std::nullopt;
    try {
      const auto j = json::parse(in);
      if (j.at("key") != key) return std::nullopt;
      return from_cache_json(j.at("result"));
    } catch (const std::exception&) {
      return std::nullopt;  // unreadable entries are recomputed
    }
  }

  void store(double kappa, const ShiftOptions& opt, const ShiftResult& r) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error("cannot create cache directory '" + dir_.string() + "': " + ec.message());
    const auto key = shift_key(kappa, opt);
    const auto target = path_for(key);
    auto tmp = target;
    tmp += ".tmp";
    {
      std::ofstream out(tmp);
      if (!out) throw Error("cannot write cache entry '" + tmp.string() + "'");
      out << json{{"key", key}, {"result", to_cache_json(r)}}.dump() << '\n';
    }
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw Error("cannot move cache entry into place: " + ec.message());
  }

 private:
  std::filesystem::path dir_;
};

// total_shift through an optional cache.
inline ShiftResult cached_total_shift(double kappa, const ShiftOptions& opt, const ShiftCache* cache,
                                      bool* hit = nullptr) {
  if (hit) *hit = false;
  if (cache) {
    if (auto r = cache->load(kappa, opt)) {
      if (hit) *hit = true;
      return *r;
    }
  }
  auto r = total_shift(kappa, opt);
  if (cache) cache->store(kappa, opt, r);
  return r;
}

}  // namespace scottshift::io
