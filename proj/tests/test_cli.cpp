/* Copyright 2026 The stochevo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */


#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "manifest.hpp"
#include "stochevo/io/json.hpp"

namespace {

namespace fs = std::filesystem;
using stochevo::io::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "stochevo");
  std::ostringstream out, err;
  const int code = stochevo::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("stochevo_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, SolveReferencePoint) {
  const auto r = run({"solve", "--r", "0.05", "--alpha", "0.2", "--nu", "0.01"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_NEAR(doc["m1_canonical"].get<double>(), 0.280776, 1e-6);
  EXPECT_NEAR(doc["m2_canonical"].get<double>(), 1.780776, 1e-6);
  EXPECT_EQ(doc["regime"], "QuasiStochastic");
  EXPECT_TRUE(doc.contains("m1_paper"));
  EXPECT_TRUE(doc.contains("alpha_star"));
  EXPECT_LE(doc["vieta"]["product_residual"].get<double>(), 1e-12);
}

TEST_F(CliTest, SolveCritical) {
  const auto r = run({"solve", "--r", "0.5", "--alpha", "1.0", "--nu", "0.02"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["regime"], "Critical");
  EXPECT_NEAR(doc["m1_canonical"].get<double>(), 0.2, 1e-15);
  EXPECT_NEAR(doc["m2_canonical"].get<double>(), 0.2, 1e-15);
}

TEST_F(CliTest, SolveZeroVolatilityIsValidationError) {
  const auto r = run({"solve", "--alpha", "0", "--r", "0.05", "--nu", "0.01"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("degenerate"), std::string::npos) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, SolveConventionFilter) {
  const auto doc = json::parse(run({"solve", "--r", "0.05", "--alpha", "0.2", "--nu", "0.01", "--convention", "canonical"}).out);
  EXPECT_FALSE(doc.contains("m1_paper"));
  EXPECT_TRUE(doc.contains("m1_canonical"));
  EXPECT_EQ(run({"solve", "--r", "0.05", "--alpha", "0.2", "--nu", "0.01", "--convention", "odd"}).code, 2);
}

TEST_F(CliTest, SolveWithOutputWritesManifest) {
  const auto r = run({"solve", "--r", "0.05", "--alpha", "0.2", "--nu", "0.01", "--out", path("s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("s.json")), r.out);
  EXPECT_TRUE(fs::exists(path("s.json.manifest.json")));
  EXPECT_EQ(run({"replay", "--manifest", path("s.json.manifest.json")}).code, 0);
}

TEST_F(CliTest, Regime) {
  const auto doc = json::parse(run({"regime", "--r", "0.5", "--alpha", "1.1"}).out);
  EXPECT_EQ(doc["regime"], "Stochastic");
  EXPECT_EQ(doc["alpha_star"].get<double>(), 1.0);
  EXPECT_EQ(run({"regime", "--r", "0", "--alpha", "1.1"}).code, 2);
}

TEST_F(CliTest, LimitsToStdout) {
  const auto r = run({"limits", "--r", "0.05", "--alpha", "0.2", "--nu", "0.01"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "limit_id,evaluated,stated,deviation,sign_agrees");
  int records = 0;
  while (std::getline(in, line)) {
    ++records;
    if (line.rfind("eq17,", 0) == 0) {
      EXPECT_NEAR(std::abs(std::stod(line.substr(5))), 1.5, 1e-3);
    }
  }
  EXPECT_EQ(records, 12);
}

TEST_F(CliTest, Figure1) {
  const auto r = run({"figure1", "--r", "0.05", "--nu", "0.01", "--alpha-min", "0.05", "--alpha-max", "2",
                      "--points", "200", "--out", path("f.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(path("f.csv")));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "alpha,m1_paper,m2_paper,m1_canonical,m2_canonical");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<double> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(std::stod(cell));
    ASSERT_EQ(f.size(), 5u);
    EXPECT_GT(f[3], 0.0);
    EXPECT_GT(f[4], 0.0);
  }
  EXPECT_EQ(rows, 200);
  EXPECT_EQ(run({"replay", "--manifest", path("f.csv.manifest.json")}).code, 0);
}

TEST_F(CliTest, SimulateKilledIsDeterministic) {
  std::vector<std::string> base{"simulate", "--mode", "killed", "--r", "0.05", "--alpha", "0.2", "--nu", "0.01",
                                "--n", "1000", "--seed", "7"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", path("a.csv")});
  b.insert(b.end(), {"--out", path("b.csv"), "--workers", "4"});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  EXPECT_EQ(stochevo::cli::sha256_hex(slurp(path("a.csv"))), stochevo::cli::sha256_hex(slurp(path("b.csv"))));
  const auto manifest = json::parse(slurp(path("a.csv.manifest.json")));
  EXPECT_EQ(manifest["command"], "simulate");
  EXPECT_EQ(manifest["seed"], 7);
  EXPECT_EQ(manifest["params"]["n"], "1000");
  EXPECT_EQ(manifest["outputs"][0]["sha256"], stochevo::cli::sha256_hex(slurp(path("a.csv"))));
  EXPECT_EQ(slurp(path("a.csv")).substr(0, 16), "kill_time,state\n");
}

TEST_F(CliTest, SimulateGbmDeterministicLimit) {
  const auto r = run({"simulate", "--mode", "gbm", "--alpha", "0", "--t", "1", "--r", "0.1", "--n", "1",
                      "--out", path("g.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(path("g.csv")));
  std::string header, value, extra;
  std::getline(in, header);
  std::getline(in, value);
  EXPECT_EQ(header, "value");
  EXPECT_EQ(std::stod(value), std::exp(0.1));
  EXPECT_FALSE(std::getline(in, extra));
}

TEST_F(CliTest, SimulateValidation) {
  EXPECT_EQ(run({"simulate", "--mode", "gbm", "--r", "0.1", "--alpha", "0.2", "--t", "1", "--n", "5", "--out",
                 path("missing/x.csv")}).code, 2);
  EXPECT_EQ(run({"simulate", "--mode", "killed", "--r", "0.1", "--alpha", "0.2", "--n", "5", "--out", path("k.csv")}).code, 2);
  EXPECT_EQ(run({"simulate", "--mode", "killed", "--r", "0.1", "--alpha", "0.2", "--nu", "0", "--n", "5", "--out",
                 path("k.csv")}).code, 2);
  EXPECT_EQ(run({"simulate", "--mode", "gbm", "--r", "0.1", "--alpha", "0.2", "--t", "1", "--n", "0", "--out",
                 path("k.csv")}).code, 2);
  EXPECT_EQ(run({"simulate", "--mode", "bogus", "--r", "0.1", "--alpha", "0.2", "--n", "5", "--out", path("k.csv")}).code, 2);
  EXPECT_FALSE(fs::exists(path("k.csv")));
  EXPECT_TRUE(fs::is_empty(dir_));
}

TEST_F(CliTest, WriteFailureLeavesNoPartialFiles) {
  fs::create_directories(path("taken"));
  const auto r = run({"simulate", "--mode", "gbm", "--r", "0.1", "--alpha", "0.2", "--t", "1", "--n", "5", "--out",
                      path("taken")});
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_FALSE(fs::exists(path("taken.tmp")));
  EXPECT_FALSE(fs::exists(path("taken.manifest.json")));
  EXPECT_FALSE(fs::exists(path("taken.manifest.json.tmp")));
}

TEST_F(CliTest, FitRecoversGenerators) {
  ASSERT_EQ(run({"simulate", "--mode", "killed", "--r", "0.05", "--alpha", "0.2", "--nu", "0.01", "--n", "100000",
                 "--seed", "3", "--out", path("k.csv")}).code, 0);
  ASSERT_EQ(run({"simulate", "--mode", "gbm", "--r", "0.05", "--alpha", "0.2", "--t", "10", "--n", "100000",
                 "--seed", "3", "--out", path("g.csv")}).code, 0);
  const auto k = run({"fit", "--input", path("k.csv")});
  ASSERT_EQ(k.code, 0) << k.err;
  EXPECT_EQ(json::parse(k.out)["preferred"], "double_pareto");
  const auto g = run({"fit", "--input", path("g.csv"), "--out", path("g.json")});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_EQ(json::parse(g.out)["preferred"], "lognormal");
  EXPECT_EQ(slurp(path("g.json")), g.out);
  EXPECT_EQ(run({"replay", "--manifest", path("g.json.manifest.json")}).code, 0);
}

TEST_F(CliTest, FitOptions) {
  {
    std::ofstream f(path("d.csv"));
    f << "value\n";
    for (int i = 1; i <= 200; ++i) f << std::pow(1.03, i) << '\n';
  }
  const auto r = run({"fit", "--input", path("d.csv"), "--models", "pareto_tail,lognormal", "--k", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  ASSERT_EQ(doc["models"].size(), 2u);
  EXPECT_EQ(doc["models"][0]["model"], "lognormal");
  EXPECT_EQ(doc["models"][1]["parameters"]["k"], 20.0);
  EXPECT_EQ(run({"fit", "--input", path("d.csv"), "--models", "cauchy"}).code, 2);
}

TEST_F(CliTest, FitSchemaAndIoErrors) {
  {
    std::ofstream f(path("bad.csv"));
    f << "value\n1.0\n-2.0\n3.0\n";
  }
  const auto r = run({"fit", "--input", path("bad.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  EXPECT_EQ(run({"fit", "--input", path("nope.csv")}).code, 3);
  {
    std::ofstream f(path("few.csv"));
    f << "value\n1\n2\n3\n4\n5\n";
  }
  EXPECT_EQ(run({"fit", "--input", path("few.csv")}).code, 2);
}

TEST_F(CliTest, FitDegeneracyIsReportedInJson) {
  {
    std::ofstream f(path("flat.csv"));
    f << "value\n";
    for (int i = 0; i < 30; ++i) f << "2.5\n";
  }
  const auto r = run({"fit", "--input", path("flat.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_TRUE(doc["preferred"].is_null());
  for (const auto& m : doc["models"]) EXPECT_TRUE(m["error"].is_string());
}

TEST_F(CliTest, HiaWritesSizesReportAndManifest) {
  const auto r = run({"hia", "--n-agents", "200", "--steps", "60", "--seed", "5", "--out", path("h.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("h.csv")));
  const auto report = json::parse(slurp(path("h.csv.report.json")));
  EXPECT_EQ(report["n_agents"], 200);
  EXPECT_TRUE(report["fit"].contains("preferred"));
  const auto manifest = json::parse(slurp(path("h.csv.manifest.json")));
  EXPECT_EQ(manifest["outputs"].size(), 2u);
  const auto replay = run({"replay", "--manifest", path("h.csv.manifest.json")});
  EXPECT_EQ(replay.code, 0) << replay.err;
}

TEST_F(CliTest, SweepAndReplay) {
  const auto r = run({"sweep", "--vary", "noise_std", "--points", "3", "--seeds", "2", "--n-agents", "100",
                      "--steps", "40", "--workers", "2", "--out", path("sw.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(path("sw.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "noise_std,coupling,effective_alpha,m1_hat,preferred_model,spearman_rho");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(run({"replay", "--manifest", path("sw.csv.manifest.json")}).code, 0);
  // A different worker count gives the same bytes.
  ASSERT_EQ(run({"sweep", "--vary", "noise_std", "--points", "3", "--seeds", "2", "--n-agents", "100", "--steps", "40",
                 "--workers", "1", "--out", path("sw1.csv")}).code, 0);
  EXPECT_EQ(slurp(path("sw1.csv")), csv);
}

TEST_F(CliTest, ReplayDetectsTampering) {
  ASSERT_EQ(run({"simulate", "--mode", "gbm", "--r", "0.1", "--alpha", "0.2", "--t", "1", "--n", "20", "--out",
                 path("x.csv"), "--manifest", path("m.json")}).code, 0);
  const std::string original = slurp(path("x.csv"));
  EXPECT_EQ(run({"replay", "--manifest", path("m.json")}).code, 0);
  EXPECT_EQ(slurp(path("x.csv")), original);
  // Edit the recorded digest so the regenerated file no longer matches it.
  auto doc = json::parse(slurp(path("m.json")));
  doc["outputs"][0]["sha256"] = std::string(64, '0');
  std::ofstream(path("m.json")) << doc.dump();
  const auto r = run({"replay", "--manifest", path("m.json")});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.out.find("MISMATCH"), std::string::npos);
}

TEST_F(CliTest, ReplayRejectsMalformedManifest) {
  std::ofstream(path("bad.json")) << "{not json";
  EXPECT_EQ(run({"replay", "--manifest", path("bad.json")}).code, 2);
  std::ofstream(path("bad2.json")) << R"({"command": "simulate"})";
  EXPECT_EQ(run({"replay", "--manifest", path("bad2.json")}).code, 2);
  EXPECT_EQ(run({"replay", "--manifest", path("absent.json")}).code, 3);
}

TEST_F(CliTest, ConfigSuppliesDefaultsFlagsOverride) {
  std::ofstream(path("run.conf")) << "# defaults\nr = 0.05\nalpha = 0.2\nnu = 0.5\nunused = 3\n";
  const auto r = run({"solve", "--config", path("run.conf"), "--nu", "0.01", "--out", path("s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["m1_canonical"].get<double>(), 0.280776, 1e-6);
  const auto manifest = json::parse(slurp(path("s.json.manifest.json")));
  EXPECT_EQ(manifest["params"]["nu"], "0.01");
  EXPECT_EQ(manifest["params"]["r"], "0.05");
  EXPECT_EQ(run({"replay", "--manifest", path("s.json.manifest.json")}).code, 0);
  std::ofstream(path("broken.conf")) << "r 0.05\n";
  EXPECT_EQ(run({"solve", "--config", path("broken.conf"), "--alpha", "0.2", "--nu", "0.01"}).code, 2);
  EXPECT_EQ(run({"solve", "--config", path("none.conf"), "--alpha", "0.2", "--nu", "0.01"}).code, 3);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"solve", "--r", "0.05"}).code, 2);
  EXPECT_EQ(run({"solve", "--r", "abc", "--alpha", "0.2", "--nu", "0.01"}).code, 2);
  const auto help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("simulate"), std::string::npos);
}

}  // namespace
