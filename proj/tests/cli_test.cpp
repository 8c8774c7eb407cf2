/*
 * Copyright 2026 The semibal Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "json.hpp"
#include "semibal/dataset_io.hpp"
#include "test_util.hpp"

namespace semibal::cli {
namespace {

using semibal::testing::read_bytes;
using semibal::testing::TempDir;
using semibal::testing::write_text;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "semibal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// Small fixture: d=3, 40 majority, 8 minority, 100 in U, 10+10 test.
std::vector<std::string> fixture_args(const std::filesystem::path& out, const char* seed = "7") {
  const std::string cfg_path = (out.parent_path() / "fixture_cfg.json").string();
  write_text(cfg_path, R"({"fixture": {"dimension": 3, "n_max": 40, "n_min": 8, "unlabeled": 100,
                           "test_majority": 10, "test_minority": 10}})");
  return {"fixture", "--config", cfg_path, "--seed", seed, "--out", out.string()};
}

TEST(Cli, FixtureIsDeterministic) {
  TempDir dir;
  ASSERT_EQ(run(fixture_args(dir / "a")).code, 0);
  ASSERT_EQ(run(fixture_args(dir / "b")).code, 0);
  for (const char* f : {"LI.csv", "U.csv", "Test.csv", "manifest.json"}) {
    EXPECT_EQ(read_bytes(dir / "a" / f), read_bytes(dir / "b" / f)) << f;
  }
  ASSERT_EQ(run(fixture_args(dir / "c", "8")).code, 0);
  EXPECT_NE(read_bytes(dir / "a" / "U.csv"), read_bytes(dir / "c" / "U.csv"));
  const auto manifest = nlohmann::json::parse(read_bytes(dir / "a" / "manifest.json"));
  EXPECT_EQ(manifest["u_origins"].size(), 100u);
  EXPECT_EQ(manifest["spec"]["seed"], 7);
  EXPECT_TRUE(std::filesystem::exists(dir / "a" / "config.json"));
}

TEST(Cli, FixtureZeroCountsWritesEmptyFiles) {
  TempDir dir;
  write_text(dir / "cfg.json", R"({"fixture": {"dimension": 2, "n_max": 0, "n_min": 0,
      "unlabeled": 0, "test_majority": 0, "test_minority": 0}})");
  const auto r = run({"fixture", "--config", (dir / "cfg.json").string(), "--out", (dir / "fx").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_bytes(dir / "fx" / "U.csv"), "id,x0,x1\n");
  EXPECT_EQ(load_dataset(dir / "fx" / "LI.csv", Format::kCsv, Role::kLI, 2, {true, false}).size(), 0u);
}

TEST(Cli, FixtureRawF32RoundTrips) {
  TempDir dir;
  auto args = fixture_args(dir / "fx");
  args.insert(args.end(), {"--format", "raw-f32"});
  ASSERT_EQ(run(args).code, 0);
  const auto li = load_dataset(dir / "fx" / "LI.f32", Format::kRawF32, Role::kLI, 3);
  EXPECT_EQ(li.size(), 48u);
  const auto r = run({"rebalance", "--manifest", (dir / "fx" / "manifest.json").string(),
                      "--method", "kd-direct", "--out", (dir / "rb").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_dataset(dir / "rb" / "LB.f32", Format::kRawF32, Role::kLB, 3).size(), 80u);
}

TEST(Cli, RebalanceKdDirectBalances) {
  TempDir dir;
  ASSERT_EQ(run(fixture_args(dir / "fx")).code, 0);
  const auto r = run({"rebalance", "--manifest", (dir / "fx" / "manifest.json").string(),
                      "--method", "kd-direct", "--out", (dir / "rb").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "method=kd-direct n_min=8 n_max=40 selected=32 lb=80\n");
  const auto lb = load_dataset(dir / "rb" / "LB.csv", Format::kCsv, Role::kLB, 3, {true, false});
  EXPECT_EQ(lb.count(Label::kMajority), 40u);
  EXPECT_EQ(lb.count(Label::kMinority), 40u);
  const auto sel = read_bytes(dir / "rb" / "selection.csv");
  EXPECT_EQ(sel.substr(0, sel.find('\n')), "query_id,selected_id,distance,method");
  EXPECT_EQ(line_count(sel), 33u);
}

TEST(Cli, RebalanceOriginalCopiesLi) {
  TempDir dir;
  ASSERT_EQ(run(fixture_args(dir / "fx")).code, 0);
  const auto r = run({"rebalance", "--manifest", (dir / "fx" / "manifest.json").string(),
                      "--method", "original", "--out", (dir / "rb").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_bytes(dir / "rb" / "LB.csv"), read_bytes(dir / "fx" / "LI.csv"));
}

TEST(Cli, RebalanceSubsamplesWithN) {
  TempDir dir;
  ASSERT_EQ(run(fixture_args(dir / "fx")).code, 0);
  const auto r = run({"rebalance", "--manifest", (dir / "fx" / "manifest.json").string(),
                      "--method", "smote-kd", "--n", "3", "--out", (dir / "rb").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "method=smote-kd n_min=3 n_max=40 selected=37 lb=80\n");
}

TEST(Cli, InsufficientPoolExitsThree) {
  TempDir dir;
  write_text(dir / "li.csv", "0,0,0\n1,1,0\n2,2,0\n9,9,1\n");
  write_text(dir / "u.csv", "5,5\n");
  const auto r = run({"rebalance", "--li", (dir / "li.csv").string(), "--u",
                      (dir / "u.csv").string(), "--dimension", "2", "--out", (dir / "rb").string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("shortfall"), std::string::npos) << r.err;
}

TEST(Cli, RenumbersCollidingPoolIds) {
  TempDir dir;
  write_text(dir / "li.csv", "0,0,0\n1,1,0\n9,9,1\n");
  write_text(dir / "u.csv", "5,5\n8,8\n");
  const auto r = run({"rebalance", "--li", (dir / "li.csv").string(), "--u",
                      (dir / "u.csv").string(), "--dimension", "2", "--out", (dir / "rb").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("renumbering"), std::string::npos);
  EXPECT_EQ(read_bytes(dir / "rb" / "selection.csv"),
            "query_id,selected_id,distance,method\n2,4,1.4142135623730951,kd-direct\n");
}

TEST(Cli, BadInputsExitTwo) {
  TempDir dir;
  write_text(dir / "li.csv", "0,nan,0\n");
  const auto r = run({"rebalance", "--li", (dir / "li.csv").string(), "--dimension", "2",
                      "--method", "original", "--out", (dir / "rb").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("row 0"), std::string::npos) << r.err;
  EXPECT_EQ(run({"rebalance", "--li", (dir / "missing.csv").string(), "--out",
                 (dir / "rb").string()}).code,
            2);
}

TEST(Cli, UsageErrorsExitOne) {
  TempDir dir;
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"grid", "--method", "gan", "--out", (dir / "g").string()}).code, 1);
  EXPECT_EQ(run({"grid", "--format", "parquet"}).code, 1);
  write_text(dir / "cfg.json", R"({"repetitons": 5})");
  const auto r = run({"grid", "--config", (dir / "cfg.json").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("repetitons"), std::string::npos) << r.err;
  write_text(dir / "nested.json", R"({"hyper": {"lr": 0.1}})");
  EXPECT_EQ(run({"grid", "--config", (dir / "nested.json").string()}).code, 1);
  EXPECT_EQ(run({"rebalance", "--out", (dir / "rb").string()}).code, 1);
}

TEST(Cli, TrainAndEvaluate) {
  TempDir dir;
  ASSERT_EQ(run(fixture_args(dir / "fx")).code, 0);
  const std::string manifest = (dir / "fx" / "manifest.json").string();
  ASSERT_EQ(run({"rebalance", "--manifest", manifest, "--out", (dir / "rb").string()}).code, 0);
  const std::string model = (dir / "model.json").string();
  auto r = run({"train", "--manifest", manifest, "--lb", (dir / "rb" / "LB.csv").string(),
                "--model", model, "--out", (dir / "tr").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"evaluate", "--manifest", manifest, "--model", model, "--out", (dir / "ev").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto metrics = nlohmann::json::parse(read_bytes(dir / "ev" / "metrics.json"));
  EXPECT_EQ(metrics["tp"].get<int>() + metrics["fp"].get<int>() + metrics["fn"].get<int>() +
                metrics["tn"].get<int>(),
            20);
  EXPECT_NE(r.out.find("f1="), std::string::npos);
}

TEST(Cli, TinyGridAndRerun) {
  TempDir dir;
  ASSERT_EQ(run(fixture_args(dir / "fx")).code, 0);
  const std::string manifest = (dir / "fx" / "manifest.json").string();
  std::vector<std::string> args = {"grid", "--manifest", manifest, "--method", "original,kd-direct",
                                   "--n", "5,50", "--repetitions", "5", "--no-timing"};
  auto a = args, b = args;
  a.insert(a.end(), {"--out", (dir / "g1").string()});
  b.insert(b.end(), {"--out", (dir / "g2").string(), "--workers", "3"});
  const auto r1 = run(a);
  ASSERT_EQ(r1.code, 0) << r1.err;
  ASSERT_EQ(run(b).code, 0);
  const auto csv = read_bytes(dir / "g1" / "grid.csv");
  // 4 grid rows, three metric lines each, plus the header.
  EXPECT_EQ(line_count(csv), 13u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "dataset,method,n,metric,mean,std,runtime_mean_s,repetitions");
  EXPECT_NE(csv.find("dataset,kd-direct,50,f1,NA,NA,NA,0"), std::string::npos) << csv;
  EXPECT_EQ(csv, read_bytes(dir / "g2" / "grid.csv"));
  EXPECT_NE(r1.err.find("[4/4]"), std::string::npos);
  const auto summary = nlohmann::json::parse(read_bytes(dir / "g1" / "summary.json"));
  EXPECT_EQ(summary["rows"], 4);
  EXPECT_FALSE(summary["failures"].empty());
}

TEST(Cli, GridFromConfigFixture) {
  TempDir dir;
  write_text(dir / "cfg.json", R"({
    "fixture": {"dimension": 3, "n_max": 30, "n_min": 10, "unlabeled": 60,
                "test_majority": 10, "test_minority": 10},
    "methods": ["original", "smote"], "n_grid": [5], "repetitions": 2,
    "dataset_id": "toy", "timing": false})");
  const auto r = run({"grid", "--config", (dir / "cfg.json").string(), "--out", (dir / "g").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = read_bytes(dir / "g" / "grid.csv");
  EXPECT_EQ(line_count(csv), 7u);
  EXPECT_NE(csv.find("toy,smote,5,f1,"), std::string::npos);
  const auto echoed = nlohmann::json::parse(read_bytes(dir / "g" / "config.json"));
  EXPECT_EQ(echoed["dataset_id"], "toy");
  EXPECT_EQ(echoed["repetitions"], 2);
}

TEST(Cli, BenchRows) {
  TempDir dir;
  write_text(dir / "cfg.json", R"({"bench": {"dimension": 2, "pool_sizes": [300],
      "n_values": [5, 150], "n_max": 200, "repetitions": 1}})");
  const auto r = run({"bench", "--config", (dir / "cfg.json").string(), "--out", (dir / "b").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = read_bytes(dir / "b" / "bench.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "workload,seed_source,pool_size,n_min,n_max,deficit,queries,nodes_visited,"
            "points_scanned,seconds_mean,repetitions");
  EXPECT_EQ(line_count(csv), 5u);
  EXPECT_NE(csv.find("kd-direct,none,300,5,200,195,5,"), std::string::npos) << csv;
  EXPECT_NE(csv.find("replace-external,smote,300,5,200,195,195,"), std::string::npos) << csv;
  EXPECT_NE(csv.find("kd-direct,none,300,150,200,50,50,"), std::string::npos) << csv;
}

TEST(Cli, OutputRootFromEnvironment) {
  TempDir dir;
  RunConfig cfg;
  ::setenv(kOutRootEnv, (dir / "root").string().c_str(), 1);
  EXPECT_EQ(cfg.out_dir("grid"), dir / "root" / "grid");
  ::unsetenv(kOutRootEnv);
  EXPECT_EQ(cfg.out_dir("grid"), std::filesystem::path("semibal-out") / "grid");
  cfg.out = dir / "explicit";
  EXPECT_EQ(cfg.out_dir("grid"), dir / "explicit");
}

TEST(Cli, ConfigRoundTrip) {
  TempDir dir;
  RunConfig cfg;
  cfg.methods = {Method::kSmote, Method::kKdDirect};
  cfg.n_grid = {5, 9};
  cfg.li = dir / "li.csv";
  cfg.hyper.l2 = 0.5;
  write_text(dir / "cfg.json", cfg.to_json().dump());
  const auto back = RunConfig::load(dir / "cfg.json");
  EXPECT_EQ(back.to_json(), cfg.to_json());
  EXPECT_FALSE(back.u.has_value());
}

}  // namespace
}  // namespace semibal::cli
