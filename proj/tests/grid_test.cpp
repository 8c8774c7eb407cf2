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

#include <set>

#include "semibal/fixture.hpp"
#include "semibal/grid.hpp"

namespace semibal {
namespace {

Fixture small_fixture(std::size_t n_min = 12) {
  FixtureSpec spec;
  spec.dimension = 4;
  spec.n_max = 40;
  spec.n_min = n_min;
  spec.unlabeled = 120;
  spec.test_majority = 20;
  spec.test_minority = 20;
  spec.separation = 3.0;
  spec.seed = 5;
  return make_fixture(spec);
}

GridConfig small_config() {
  GridConfig cfg;
  cfg.dataset_id = "fx";
  cfg.repetitions = 3;
  cfg.hyper.max_epochs = 200;
  return cfg;
}

TEST(Subsample, KeepsMajorityAndDrawsMinority) {
  const auto fx = small_fixture();
  const auto li = subsample_minority(fx.li, 5, 1);
  EXPECT_EQ(li.count(Label::kMajority), 40u);
  EXPECT_EQ(li.count(Label::kMinority), 5u);
  std::set<SampleId> full;
  for (const auto& s : fx.li) full.insert(s.id);
  for (const auto& s : li) EXPECT_TRUE(full.contains(s.id));
  EXPECT_EQ(subsample_minority(fx.li, 5, 1).samples().size(), li.samples().size());
  for (std::size_t i = 0; i < li.size(); ++i) EXPECT_EQ(subsample_minority(fx.li, 5, 1)[i].id, li[i].id);
  EXPECT_THROW(subsample_minority(fx.li, 13, 1), InfeasibleError);
  EXPECT_EQ(subsample_minority(fx.li, 12, 9).count(Label::kMinority), 12u);
}

TEST(Grid, SingleOriginalRow) {
  const auto fx = small_fixture();
  auto cfg = small_config();
  cfg.methods = {Method::kOriginal};
  cfg.n_grid = {5};
  const auto g = run_grid(fx.li, fx.u, fx.test, cfg);
  ASSERT_EQ(g.rows.size(), 1u);
  EXPECT_FALSE(g.rows[0].failed);
  EXPECT_EQ(g.rows[0].runtime_mean_s(), 0.0);
  EXPECT_EQ(g.rows[0].report.completed(), 3u);
}

TEST(Grid, DefaultGridHasNinetySixRows) {
  const auto fx = small_fixture(150);
  auto cfg = small_config();
  cfg.repetitions = 0;
  const auto g = run_grid(fx.li, fx.u, fx.test, cfg);
  EXPECT_EQ(g.rows.size(), 96u);
  EXPECT_EQ(g.rows[0].method, Method::kOriginal);
  EXPECT_EQ(g.rows[0].n, 5u);
  EXPECT_EQ(g.rows[12].method, Method::kSmote);
  EXPECT_EQ(g.rows[95].n, 150u);
}

TEST(Grid, InfeasibleAndMissingExternalRowsFail) {
  const auto fx = small_fixture();
  auto cfg = small_config();
  cfg.methods = {Method::kKdDirect, Method::kReplaceExternal};
  cfg.n_grid = {5, 50};
  const auto g = run_grid(fx.li, fx.u, fx.test, cfg);
  ASSERT_EQ(g.rows.size(), 4u);
  EXPECT_FALSE(g.find(Method::kKdDirect, 5)->failed);
  EXPECT_TRUE(g.find(Method::kKdDirect, 50)->failed);
  EXPECT_NE(g.find(Method::kKdDirect, 50)->reason.find("infeasible"), std::string::npos);
  EXPECT_TRUE(g.find(Method::kReplaceExternal, 5)->failed);
  const auto csv = grid_csv(g);
  EXPECT_NE(csv.find("fx,kd-direct,50,f1,NA,NA,NA,0\n"), std::string::npos) << csv;
}

TEST(Grid, PoolShortfallFailsEveryRepetition) {
  const auto fx = small_fixture();
  auto cfg = small_config();
  cfg.methods = {Method::kKdDirect};
  cfg.n_grid = {5};
  const VectorDataset tiny(4, Role::kU, {fx.u[0], fx.u[1]});
  const auto g = run_grid(fx.li, tiny, fx.test, cfg);
  EXPECT_TRUE(g.rows[0].failed);
  EXPECT_EQ(g.rows[0].report.failures.size(), 3u);
}

TEST(Grid, ExternalRowsRunWithBatch) {
  const auto fx = small_fixture();
  auto cfg = small_config();
  cfg.methods = {Method::kExternalSynthetic, Method::kReplaceExternal};
  cfg.n_grid = {5};
  std::vector<EmbeddedSample> syn;
  for (std::size_t i = 0; i < 40; ++i) syn.push_back({SampleId(i), fx.u[i].vector, {}});
  cfg.external = external_batch(VectorDataset(4, Role::kU, syn));
  const auto g = run_grid(fx.li, fx.u, fx.test, cfg);
  EXPECT_FALSE(g.rows[0].failed) << g.rows[0].reason;
  EXPECT_FALSE(g.rows[1].failed) << g.rows[1].reason;
}

TEST(Grid, BitwiseDeterministicAndWorkerInvariant) {
  const auto fx = small_fixture();
  auto cfg = small_config();
  cfg.n_grid = {5, 10};
  cfg.methods = {Method::kOriginal, Method::kSmote, Method::kAdasyn, Method::kKdDirect,
                 Method::kSmoteKd, Method::kAdasynKd};
  const auto a = grid_csv(run_grid(fx.li, fx.u, fx.test, cfg), false);
  const auto b = grid_csv(run_grid(fx.li, fx.u, fx.test, cfg), false);
  cfg.workers = 4;
  std::size_t callbacks = 0;
  const auto c = grid_csv(run_grid(fx.li, fx.u, fx.test, cfg, [&](const GridRow&) { ++callbacks; }),
                          false);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_EQ(callbacks, 12u);
  cfg.seed = 43;
  EXPECT_NE(grid_csv(run_grid(fx.li, fx.u, fx.test, cfg), false), a);
}

TEST(Grid, CsvLayout) {
  GridResult g;
  GridRow row{"d", Method::kSmote, 7, {}, false, {}};
  const std::vector<double> f1{0.4, 0.6};
  row.report.precision = {1.0, 0.0};
  row.report.recall = {0.5, 0.25};
  row.report.f1 = mean_std(f1);
  row.report.runtime_seconds = {0.125, 0.0};
  row.report.values.resize(2);
  g.rows.push_back(row);
  EXPECT_EQ(grid_csv(g),
            "dataset,method,n,metric,mean,std,runtime_mean_s,repetitions\n"
            "d,smote,7,precision,1,0,0.125,2\n"
            "d,smote,7,recall,0.5,0.25,0.125,2\n"
            "d,smote,7,f1,0.5,0.09999999999999998,0.125,2\n");
  EXPECT_NE(grid_csv(g, false).find("d,smote,7,f1,0.5,0.09999999999999998,NA,2\n"),
            std::string::npos);
}

TEST(Grid, EmptyTestSetIsUsageError) {
  const auto fx = small_fixture();
  EXPECT_THROW(run_grid(fx.li, fx.u, VectorDataset(4, Role::kTest, {}), small_config()),
               UsageError);
}

}  // namespace
}  // namespace semibal
