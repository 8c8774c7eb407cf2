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

#ifndef SEMIBAL_BENCH_HPP
#define SEMIBAL_BENCH_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semibal/fixture.hpp"
#include "semibal/grid.hpp"
#include "semibal/oversample.hpp"
#include "semibal/random.hpp"
#include "semibal/rebalance.hpp"

namespace semibal {

/// Selection-time comparison between the direct route and the
/// synthetic-seeded (replace-external) route over fixture pools.
struct BenchConfig {
  std::size_t dimension = 32;
  std::vector<std::size_t> pool_sizes = {2000, 10000};
  std::vector<std::size_t> n_values = {5, 150};
  std::size_t n_max = 900;
  std::size_t repetitions = 10;
  double separation = 4.0;
  double spread = 1.0;
  std::uint64_t seed = 42;
  RebalanceOptions rebalance;
  // Seeds for the replace-external workload. When absent, SMOTE output of
  // the same size stands in for the generator.
  std::optional<SyntheticBatch> external;
};

struct BenchRow {
  std::string workload;  // "kd-direct" or "replace-external"
  std::string seed_source;  // "none", "external" or "smote"
  std::size_t pool_size = 0;
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  std::size_t deficit = 0;
  std::size_t queries = 0;
  QueryStats stats;
  double seconds_mean = 0.0;
  std::size_t repetitions = 0;
};

/// Times only the selection call; seed generation is excluded. Query counts
/// and traversal counters come from the first repetition (they do not vary).
inline std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  std::vector<BenchRow> rows;
  for (std::size_t pool : cfg.pool_sizes) {
    for (std::size_t n : cfg.n_values) {
      FixtureSpec spec;
      spec.dimension = cfg.dimension;
      spec.n_max = cfg.n_max;
      spec.n_min = n;
      spec.unlabeled = pool;
      spec.test_majority = 0;
      spec.test_minority = 0;
      spec.separation = cfg.separation;
      spec.spread = cfg.spread;
      spec.seed = derive_seed(cfg.seed, {pool, n});
      const Fixture fx = make_fixture(spec);
      const auto split = split_by_class(fx.li);
      const std::size_t deficit = split.n_max() - split.n_min();

      SyntheticBatch seeds;
      std::string source = "external";
      if (cfg.external) {
        seeds = cfg.external->head(deficit);
      } else {
        seeds = smote(split.minority, deficit, cfg.rebalance.k, spec.seed);
        source = "smote";
      }

      BenchRow direct{"kd-direct", "none", pool, n, cfg.n_max, deficit, 0, {}, 0.0,
                      cfg.repetitions};
      BenchRow seeded{"replace-external", source, pool, n, cfg.n_max, deficit, 0, {}, 0.0,
                      cfg.repetitions};
      double direct_total = 0.0, seeded_total = 0.0;
      for (std::size_t r = 0; r < cfg.repetitions; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        const auto a = rebalance_direct(fx.li, fx.u, cfg.rebalance);
        auto t1 = std::chrono::steady_clock::now();
        direct_total += std::chrono::duration<double>(t1 - t0).count();
        t0 = std::chrono::steady_clock::now();
        const auto b =
            rebalance_indirect(fx.li, fx.u, seeds, Method::kReplaceExternal, cfg.rebalance);
        t1 = std::chrono::steady_clock::now();
        seeded_total += std::chrono::duration<double>(t1 - t0).count();
        if (r == 0) {
          direct.queries = a.record.queries;
          direct.stats = a.record.stats;
          seeded.queries = b.record.queries;
          seeded.stats = b.record.stats;
        }
      }
      if (cfg.repetitions > 0) {
        direct.seconds_mean = direct_total / static_cast<double>(cfg.repetitions);
        seeded.seconds_mean = seeded_total / static_cast<double>(cfg.repetitions);
      }
      rows.push_back(direct);
      rows.push_back(seeded);
    }
  }
  return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out =
      "workload,seed_source,pool_size,n_min,n_max,deficit,queries,nodes_visited,points_scanned,"
      "seconds_mean,repetitions\n";
  for (const auto& r : rows) {
    out += r.workload + ',' + r.seed_source + ',' + std::to_string(r.pool_size) + ',' +
           std::to_string(r.n_min) + ',' + std::to_string(r.n_max) + ',' +
           std::to_string(r.deficit) + ',' + std::to_string(r.queries) + ',' +
           std::to_string(r.stats.nodes_visited) + ',' + std::to_string(r.stats.points_scanned) +
           ',';
    detail::append_number(out, r.seconds_mean);
    out += ',' + std::to_string(r.repetitions) + '\n';
  }
  return out;
}

}  // namespace semibal

#endif  // SEMIBAL_BENCH_HPP
