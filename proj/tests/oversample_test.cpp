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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "semibal/oversample.hpp"
#include "test_util.hpp"

namespace semibal {
namespace {

VectorDataset points(std::vector<std::vector<double>> xs, Label label, SampleId first_id = 0) {
  std::vector<EmbeddedSample> s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s.push_back({first_id + static_cast<SampleId>(i), std::move(xs[i]), label});
  }
  const std::size_t d = s.empty() ? 1 : s.front().vector.size();
  return VectorDataset(d, Role::kLI, std::move(s));
}

VectorDataset gaussian(std::size_t n, std::size_t d, double shift, Label label, SampleId first,
                       std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> xs(n, std::vector<double>(d));
  for (auto& x : xs) {
    for (auto& v : x) v = normal(gen);
    x[0] += shift;
  }
  return points(std::move(xs), label, first);
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

const std::vector<double>& by_id(const VectorDataset& ds, SampleId id) {
  for (const auto& s : ds) {
    if (s.id == id) return s.vector;
  }
  throw std::logic_error("missing id");
}

TEST(Smote, InterpolationExamples) {
  EXPECT_EQ(detail::interpolate({0, 0}, {2, 2}, 0.5), (std::vector<double>{1, 1}));
  EXPECT_EQ(detail::interpolate({3, -1}, {7, 5}, 0.0), (std::vector<double>{3, -1}));
  EXPECT_EQ(detail::interpolate({3, -1}, {7, 5}, 1.0), (std::vector<double>{7, 5}));
}

TEST(Smote, TwoPointSegment) {
  const auto minority = points({{0, 0}, {2, 2}}, Label::kMinority);
  const auto batch = smote(minority, 10, 5, 1);
  ASSERT_EQ(batch.size(), 10u);
  EXPECT_EQ(batch.origin, Origin::kSmote);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& p = batch.provenance[i];
    EXPECT_EQ(p.source_id, static_cast<SampleId>(i % 2));
    EXPECT_EQ(p.neighbor_id, static_cast<SampleId>(1 - i % 2));
    EXPECT_GE(p.alpha, 0.0);
    EXPECT_LT(p.alpha, 1.0);
    EXPECT_DOUBLE_EQ(batch.samples[i][0], batch.samples[i][1]);
  }
}

TEST(Smote, CountZeroIsEmpty) {
  const auto minority = points({{0.0}}, Label::kMinority);
  EXPECT_TRUE(smote(minority, 0, 2, 1).empty());
}

TEST(Smote, NeedsTwoMinorityPoints) {
  const auto one = points({{1.0, 2.0}}, Label::kMinority);
  try {
    smote(one, 3, 2, 1);
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_STREQ(e.what(), "insufficient minority samples for interpolation");
  }
  EXPECT_THROW(smote(points({{0.0}, {1.0}}, Label::kMinority), 3, 0, 1), UsageError);
}

TEST(Smote, DeterministicPerSeed) {
  std::mt19937_64 gen(5);
  const auto minority = gaussian(12, 4, 0.0, Label::kMinority, 0, gen);
  const auto a = smote(minority, 40, 3, 9);
  const auto b = smote(minority, 40, 3, 9);
  const auto c = smote(minority, 40, 3, 10);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_NE(a.samples, c.samples);
}

TEST(Smote, SourcesCycleInIdOrder) {
  const auto minority = points({{5.0}, {1.0}, {3.0}}, Label::kMinority, 0);
  std::vector<EmbeddedSample> shuffled = {minority[2], minority[0], minority[1]};
  const VectorDataset ds(1, Role::kLI, shuffled);
  const auto batch = smote(ds, 7, 1, 3);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    EXPECT_EQ(batch.provenance[i].source_id, static_cast<SampleId>(i % 3));
  }
}

// Property: every sample lies on the segment between its source and one of
// the source's k_eff nearest minority neighbors.
TEST(Smote, CollinearityAndNeighborhoodProperty) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + gen() % 20;
    const std::size_t d = 1 + gen() % 10;
    const std::size_t k = 1 + gen() % 6;
    const auto minority = gaussian(n, d, 0.0, Label::kMinority, 100, gen);
    const auto batch = smote(minority, gen() % 50, k, gen());
    const std::size_t k_eff = std::min(k, n - 1);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto& p = batch.provenance[i];
      const auto& x = by_id(minority, p.source_id);
      const auto& nn = by_id(minority, p.neighbor_id);
      const auto& s = batch.samples[i];
      const double total = dist(x, nn);
      EXPECT_NEAR(dist(s, x) + dist(s, nn), total, 1e-6 * std::max(total, 1e-12));
      for (std::size_t j = 0; j < d; ++j) EXPECT_NEAR(s[j], x[j] + p.alpha * (nn[j] - x[j]), 1e-9);

      // The neighbor must be no farther than the k_eff-th nearest other point.
      std::vector<double> others;
      for (const auto& o : minority) {
        if (o.id != p.source_id) others.push_back(dist(o.vector, x));
      }
      std::sort(others.begin(), others.end());
      EXPECT_LE(dist(nn, x), others[k_eff - 1]);
    }
  }
}

TEST(LargestRemainder, SumsExactly) {
  const std::vector<double> w{2.0 / 3.0, 1.0 / 3.0};
  EXPECT_EQ(largest_remainder(w, 4), (std::vector<std::size_t>{3, 1}));
  const std::vector<double> thirds(3, 1.0 / 3.0);
  EXPECT_EQ(largest_remainder(thirds, 7), (std::vector<std::size_t>{3, 2, 2}));
  EXPECT_TRUE(largest_remainder({}, 5).empty());
}

TEST(Adasyn, HandComputedAllocation) {
  // m1 at 0 has two majority neighbours, m2 at 0.5 has one majority and m1.
  const auto minority = points({{0.0}, {0.5}}, Label::kMinority, 10);
  const auto majority =
      points({{-0.1}, {0.1}, {100.0}, {101.0}, {102.0}, {103.0}}, Label::kMajority, 0);
  const auto a = adasyn_allocation(majority, minority, 2);
  EXPECT_EQ(a.total, 4u);
  EXPECT_EQ(a.ratios, (std::vector<double>{1.0, 0.5}));
  EXPECT_NEAR(a.density[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(a.density[1], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(a.counts, (std::vector<std::size_t>{3, 1}));
  const auto batch = adasyn(majority, minority, 2, 5);
  ASSERT_EQ(batch.size(), 4u);
  EXPECT_EQ(batch.origin, Origin::kAdasyn);
  EXPECT_EQ(batch.provenance[0].source_id, 10);
  EXPECT_EQ(batch.provenance[2].source_id, 10);
  EXPECT_EQ(batch.provenance[3].source_id, 11);
}

TEST(Adasyn, UniformFallbackWhenNoMajorityNeighbors) {
  const auto minority = points({{0.0}, {1.0}, {2.0}}, Label::kMinority, 0);
  std::vector<std::vector<double>> far;
  for (int i = 0; i < 9; ++i) far.push_back({1000.0 + i});
  const auto majority = points(far, Label::kMajority, 50);
  const auto a = adasyn_allocation(majority, minority, 2);
  EXPECT_EQ(a.total, 6u);
  EXPECT_EQ(a.counts, (std::vector<std::size_t>{2, 2, 2}));
  EXPECT_EQ(adasyn(majority, minority, 2, 1).size(), 6u);
}

TEST(Adasyn, BalancedInputYieldsEmptyBatch) {
  const auto minority = points({{0.0}, {1.0}}, Label::kMinority, 0);
  const auto majority = points({{5.0}, {6.0}}, Label::kMajority, 10);
  EXPECT_TRUE(adasyn(majority, minority, 2, 1).empty());
}

TEST(Adasyn, ErrorPaths) {
  const auto one = points({{0.0}}, Label::kMinority, 0);
  const auto majority = points({{5.0}, {6.0}, {7.0}}, Label::kMajority, 10);
  EXPECT_THROW(adasyn(majority, one, 2, 1), InfeasibleError);
  const auto many = points({{0.0}, {1.0}, {2.0}, {3.0}}, Label::kMinority, 0);
  EXPECT_THROW(adasyn(majority, many, 2, 1), UsageError);
}

// Properties: counts sum to G, densities sum to one, and a larger ratio never
// gets a smaller share before or after rounding.
TEST(Adasyn, AllocationProperties) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n_min = 2 + gen() % 15;
    const std::size_t n_max = n_min + gen() % 60;
    const std::size_t d = 1 + gen() % 5;
    const auto minority = gaussian(n_min, d, 1.0, Label::kMinority, 1000, gen);
    const auto majority = gaussian(n_max, d, 0.0, Label::kMajority, 0, gen);
    const std::size_t k = 1 + gen() % 7;
    const auto a = adasyn_allocation(majority, minority, k);
    EXPECT_EQ(a.total, n_max - n_min);
    EXPECT_EQ(std::accumulate(a.counts.begin(), a.counts.end(), std::size_t{0}), a.total);
    EXPECT_NEAR(std::accumulate(a.density.begin(), a.density.end(), 0.0), 1.0, 1e-12);
    for (std::size_t i = 0; i < n_min; ++i) {
      for (std::size_t j = 0; j < n_min; ++j) {
        if (a.ratios[i] > a.ratios[j]) {
          EXPECT_GE(a.density[i] * a.total, a.density[j] * a.total);
          EXPECT_GE(a.counts[i], a.counts[j]);
        }
      }
    }
    const auto batch = adasyn(majority, minority, k, gen());
    EXPECT_EQ(batch.size(), a.total);
    std::map<SampleId, std::size_t> per_source;
    for (const auto& p : batch.provenance) ++per_source[p.source_id];
    for (std::size_t i = 0; i < n_min; ++i) {
      EXPECT_EQ(per_source[a.minority_ids[i]], a.counts[i]);
    }
  }
}

TEST(External, LoadsFiveVectors) {
  testing::TempDir dir;
  testing::write_text(dir / "syn.csv", "0,1\n1,2\n2,3\n3,4\n4,5\n");
  const auto batch = load_external_synthetics(dir / "syn.csv", 2);
  ASSERT_EQ(batch.size(), 5u);
  EXPECT_EQ(batch.origin, Origin::kExternal);
  EXPECT_EQ(batch.provenance[3].file_offset, 3u);
  EXPECT_EQ(batch.samples[4], (std::vector<double>{4, 5}));
}

TEST(External, NaNNamesRow) {
  testing::TempDir dir;
  testing::write_text(dir / "syn.csv", "0,1\n1,nan\n");
  try {
    load_external_synthetics(dir / "syn.csv", 2);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos) << e.what();
  }
}

TEST(External, EmptyFileIsEmptyBatch) {
  testing::TempDir dir;
  testing::write_text(dir / "syn.csv", "");
  EXPECT_TRUE(load_external_synthetics(dir / "syn.csv", 2).empty());
}

TEST(SyntheticBatch, HeadTruncates) {
  const auto minority = points({{0.0}, {1.0}}, Label::kMinority);
  const auto batch = smote(minority, 5, 1, 2);
  EXPECT_EQ(batch.head(3).size(), 3u);
  EXPECT_EQ(batch.head(9).size(), 5u);
  EXPECT_EQ(batch.head(3).samples[2], batch.samples[2]);
}

}  // namespace
}  // namespace semibal
