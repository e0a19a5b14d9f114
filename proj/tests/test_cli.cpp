#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(LRAZ_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path temp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("lraz_cli_test_" + name);
}

}  // namespace

TEST(Cli, Covers) {
  const CliRun r = run("covers '3 3; 1 1; 1 2; 2 2'");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["count"], 3);
  EXPECT_EQ(j["manifest"]["command"], "covers");
  EXPECT_EQ(run("covers '3 3'").code, 0);
  EXPECT_EQ(json::parse(run("covers '3 3'").out)["count"], 1);
  EXPECT_EQ(run("covers '3 3; 4 1'").code, 2);
  EXPECT_EQ(run("covers").code, 2);
}

TEST(Cli, SeedFromEnvironment) {
  const CliRun r = run("--seed 5 covers '2 2'");
  EXPECT_EQ(json::parse(r.out)["manifest"]["seed"], 5);
  const CliRun e = run("covers '2 2'");
  const std::string cmd = std::string("LRAZ_SEED=31 ") + LRAZ_CLI + " covers '2 2'";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  pclose(p);
  EXPECT_EQ(json::parse(out)["manifest"]["seed"], 31);
  EXPECT_EQ(e.code, 0);
}

TEST(Cli, ApproxSpectralAndHomotopy) {
  CliRun r = run("approx -U '1,-1,-2,-2;1,0,1,-2;2,0,0,2' -S '1 1; 1 2' -r 1");
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["method"], "svd");
  EXPECT_NEAR(j["best"]["X"][0][3].get<double>(), -2.36438, 1e-5);

  const auto sol = temp("solutions.json");
  r = run("approx -U '78.57,93.47,51.33;-58.54,-7.64,34.34;53.53,-89.96,-87.14' -S '1 1' -r 2 --solutions " +
          sol.string());
  ASSERT_EQ(r.code, 0);
  j = json::parse(r.out);
  EXPECT_EQ(j["method"], "homotopy");
  EXPECT_EQ(j["critical_points"], 8);
  EXPECT_EQ(j["real_critical_points"], 4);

  r = run("verify " + sol.string() + " --conjectures");
  EXPECT_EQ(r.code, 0);
  j = json::parse(r.out);
  EXPECT_TRUE(j.contains("conjecture_observations"));
  for (const auto& c : j["theorem_checks"]) EXPECT_EQ(c["status"], "PASS");

  json inst = json::parse(std::ifstream(sol));
  inst["solutions"][0]["X"][0][1][0] = inst["solutions"][0]["X"][0][1][0].get<double>() + 0.5;
  const auto bad = temp("bad.json");
  std::ofstream(bad) << inst.dump();
  EXPECT_EQ(run("verify " + bad.string()).code, 1);
  std::filesystem::remove(sol);
  std::filesystem::remove(bad);

  EXPECT_EQ(run("approx -U '1,2;3,4' -r 1 --method bogus").code, 2);
  EXPECT_EQ(run("approx -U '1,2,3;4,5,6;7,8,10' -S '1 1' -r 2 --method svd").code, 3);
}

TEST(Cli, EdDegree) {
  CliRun r = run("eddeg --m 3 --n 3 -r 2 --pattern '1 1'");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["ed_degree"], 8);
  r = run("eddeg --m 4 --n 5 -r 2 --pattern ''");
  EXPECT_EQ(json::parse(r.out)["ed_degree"], 6);
  EXPECT_EQ(run("eddeg --m 3 --n 3 -r 3").code, 2);
}

TEST(Cli, Tables) {
  const CliRun r = run("tables --name rank1-diagonal --max-size 4");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["all_match_in_envelope"].get<bool>());
  EXPECT_EQ(run("tables --name eddeg-corank1 --max-size 3").code, 0);
  EXPECT_EQ(run("tables --name nope").code, 2);
}

TEST(Cli, NonnegativeRankTwo) {
  const CliRun r = run("nnr2 solve -U '1,2,3;4,5,6;7,8,9.5'");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["census"]["diagonal_pattern"]["generated"], 702);
  EXPECT_EQ(run("nnr2 solve -U '1,-2,3;4,5,6;7,8,9'").code, 2);

  const auto csv = temp("exp.csv");
  const auto out = temp("exp.json");
  EXPECT_EQ(run("-o " + out.string() + " nnr2 experiment --count 5 --csv " + csv.string()).code, 0);
  const json s = json::parse(std::ifstream(out));
  EXPECT_EQ(s["count"], 5);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "sample_id,zeros_count,pattern,obs_b_status");
  std::filesystem::remove(csv);
  std::filesystem::remove(out);
}
