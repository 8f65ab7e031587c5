#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "scottshift/cli.hpp"

using namespace scottshift;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "scottshift");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto d = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(d);
  return d;
}

const std::vector<std::string> kSmallShift = {"--two-j-max", "5", "--n-levels", "6", "--nodes", "300", "--no-cache"};

}  // namespace

TEST(Cli, CriticalTable) {
  const auto r = run({"critical"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("0.636619772368"), std::string::npos);
  EXPECT_NE(r.out.find("1.57079632679"), std::string::npos);
  EXPECT_NE(r.out.find("0.906036700901"), std::string::npos);
  const auto j = io::json::parse(run({"critical", "--format", "json", "--max-index", "2"}).out);
  EXPECT_EQ(j["critical"].size(), 6u);
  EXPECT_EQ(j["config"]["max_index"], 2);
}

TEST(Cli, ScottInfiniteSpeed) {
  const auto r = run({"scott", "--Z", "100", "--c", "inf", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::json::parse(r.out);
  EXPECT_EQ(j["rows"][0]["scott_term"], 5000.0);
  EXPECT_EQ(j["rows"][0]["c"], "inf");
  const auto csv = run({"scott", "--Z", "1", "2", "--c", "inf", "--format", "csv"});
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "Z,c,kappa,e_tf,scott_term,total,s,s_error");
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 3);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"critical", "--bogus"}).code, 2);
  EXPECT_NE(run({"critical", "--bogus"}).err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"shift", "--kappa", "0.95", "--no-cache"}).code, 2);
  const auto sup = run({"scott", "--Z", "130", "--c", "137", "--no-cache"});
  EXPECT_EQ(sup.code, 2);
  EXPECT_NE(sup.err.find("c must be at least"), std::string::npos);
  EXPECT_TRUE(sup.out.empty());
  EXPECT_EQ(run({"shift", "--curve", "0.1:0.2", "--no-cache"}).code, 2);
  EXPECT_EQ(run({"levels", "--kind", "br", "--kappa", "0.5", "--two-j", "1", "--l", "3"}).code, 2);
}

TEST(Cli, LevelsAndDump) {
  const auto path = fresh_dir("scottshift_cli_dump.bin");
  const auto r = run({"levels", "--kind", "schroedinger", "--kappa", "1", "--two-j", "1", "--l", "0", "--n", "3",
                      "--nodes", "400", "--format", "json", "--dump", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::json::parse(r.out);
  EXPECT_EQ(j["levels"].size(), 3u);
  EXPECT_NEAR(j["levels"][0]["eigenvalue"].get<double>(), -0.5, 1e-3);
  const auto [hdr, a] = read_matrix_dump(path.string());
  EXPECT_EQ(hdr.n, 400u);
  std::filesystem::remove(path);
}

TEST(Cli, VerifySuiteJson) {
  const auto r = run({"verify", "--suite", "couplings", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["config"]["seed"], kDefaultSeed);
  EXPECT_EQ(run({"verify", "--suite", "bogus"}).code, 2);
}

TEST(Cli, ShiftJsonIsDeterministicAcrossThreads) {
  auto args = std::vector<std::string>{"shift", "--kappa", "0.4", "--format", "json"};
  args.insert(args.end(), kSmallShift.begin(), kSmallShift.end());
  const auto a = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  args.insert(args.end(), {"--threads", "3"});
  const auto b = run(args);
  EXPECT_EQ(a.out, b.out);
  const auto j = io::json::parse(a.out);
  const auto& res = j["results"][0];
  for (const char* key : {"kappa", "s", "error", "model", "two_j_max", "n_levels", "channels", "channel_tail", "c_hat"})
    EXPECT_TRUE(res.contains(key)) << key;
  EXPECT_EQ(res["channels"].size(), 6u);
}

TEST(Cli, CacheHitReproducesOutput) {
  const auto dir = fresh_dir("scottshift_cli_cache");
  auto args = std::vector<std::string>{"shift", "--kappa", "0.3", "--format", "json", "--two-j-max", "5",
                                       "--n-levels", "6", "--nodes", "300", "--cache-dir", dir.string()};
  const auto a = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator()), 1);
  const auto b = run(args);
  EXPECT_EQ(a.out, b.out);

  // a different grid is a different key
  args[10] = "320";
  run(args);
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator()), 2);
  std::filesystem::remove_all(dir);
}

TEST(Cli, CacheKeyIgnoresThreadsOnly) {
  ShiftOptions a;
  ShiftOptions b = a;
  b.threads = 8;
  EXPECT_EQ(io::shift_key(0.5, a), io::shift_key(0.5, b));
  b.n_levels = 13;
  EXPECT_NE(io::shift_key(0.5, a), io::shift_key(0.5, b));
  EXPECT_NE(io::shift_key(0.5, a), io::shift_key(std::nextafter(0.5, 1.0), a));
}

TEST(Cli, ShiftCurveCsv) {
  auto args = std::vector<std::string>{"shift", "--curve", "0.2:0.4:3", "--format", "csv"};
  args.insert(args.end(), kSmallShift.begin(), kSmallShift.end());
  const auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
  EXPECT_EQ(r.out.find("kappa,s,error"), 0u);
}

TEST(Cli, TfRoutes) {
  const auto r = run({"tf", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::json::parse(r.out);
  EXPECT_NEAR(j["E_TF_1"].get<double>(), -0.768745, 1e-6);
  EXPECT_EQ(j["routes"].size(), 2u);
  EXPECT_LT(std::abs(j["relative_difference"].get<double>()), 2e-3);
  EXPECT_EQ(run({"tf", "--route", "sideways"}).code, 2);
}
