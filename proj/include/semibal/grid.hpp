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

#ifndef SEMIBAL_GRID_HPP
#define SEMIBAL_GRID_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "semibal/dataset.hpp"
#include "semibal/errors.hpp"
#include "semibal/logreg.hpp"
#include "semibal/metrics.hpp"
#include "semibal/random.hpp"
#include "semibal/rebalance.hpp"

namespace semibal {

/// Minority sizes used for the LI_n training sets.
inline const std::vector<std::size_t> kDefaultMinorityGrid = {5,  6,  7,  8,  9,   10,
                                                              20, 30, 40, 50, 100, 150};

struct GridConfig {
  std::string dataset_id = "dataset";
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  std::vector<std::size_t> n_grid = kDefaultMinorityGrid;
  std::size_t repetitions = 100;
  std::uint64_t seed = 42;
  LogRegHyper hyper;
  RebalanceOptions rebalance;
  std::size_t workers = 1;
  // Generator output for external-synthetic / replace-external; rows for
  // those methods fail when absent.
  std::optional<SyntheticBatch> external;
};

struct GridRow {
  std::string dataset;
  Method method = Method::kOriginal;
  std::size_t n = 0;
  BootstrapReport report;
  bool failed = false;
  std::string reason;

  double runtime_mean_s() const { return report.runtime_seconds.mean; }
};

struct GridResult {
  std::vector<GridRow> rows;

  const GridRow* find(Method m, std::size_t n) const {
    for (const auto& r : rows) {
      if (r.method == m && r.n == n) return &r;
    }
    return nullptr;
  }
};

/// LI_n: every majority sample of LI_full plus n minority samples drawn
/// without replacement. File order of LI_full is kept.
inline VectorDataset subsample_minority(const VectorDataset& li_full, std::size_t n,
                                        std::uint64_t seed) {
  const auto split = split_by_class(li_full);
  if (n > split.n_min()) {
    throw InfeasibleError("requested " + std::to_string(n) + " minority samples, only " +
                          std::to_string(split.n_min()) + " available");
  }
  std::vector<std::size_t> idx(split.n_min());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.index(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<bool> keep_id(split.n_min(), false);
  for (std::size_t i = 0; i < n; ++i) keep_id[idx[i]] = true;
  std::vector<SampleId> chosen;
  for (std::size_t i = 0; i < split.n_min(); ++i) {
    if (keep_id[i]) chosen.push_back(split.minority[i].id);
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<EmbeddedSample> out;
  for (const auto& s : li_full) {
    if (*s.label != split.minority_label ||
        std::binary_search(chosen.begin(), chosen.end(), s.id)) {
      out.push_back(s);
    }
  }
  return VectorDataset(li_full.dimension(), li_full.role(), std::move(out));
}

/// One repetition: subsample LI_n, rebalance (timed), train, score on Test.
/// The original method has no augmentation step and reports zero time.
/// The subsample depends only on (seed, n), so methods see identical LI_n
/// within a repetition.
inline RepetitionOutcome run_repetition(const VectorDataset& li_full, const VectorDataset& u,
                                        const VectorDataset& test, Method method, std::size_t n,
                                        const GridConfig& cfg, std::uint64_t seed) {
  const auto positive = label_value(split_by_class(li_full).minority_label);
  const VectorDataset li_n = subsample_minority(li_full, n, derive_seed(seed, {n, 0}));
  const auto* external = cfg.external ? &*cfg.external : nullptr;
  const auto t0 = std::chrono::steady_clock::now();
  const RebalanceResult rb =
      rebalance(method, li_n, u, cfg.rebalance, derive_seed(seed, {n, 1}), external);
  const auto t1 = std::chrono::steady_clock::now();
  const LogRegModel model = train(rb.lb, cfg.hyper, seed);
  const auto predictions = model.predict(test);
  std::vector<int> labels;
  labels.reserve(test.size());
  for (const auto& s : test) labels.push_back(label_value(*s.label));
  const double seconds =
      method == Method::kOriginal ? 0.0 : std::chrono::duration<double>(t1 - t0).count();
  return {compute_metrics(predictions, labels, positive), seconds};
}

/// Runs bootstrap(R) for every (method, n) pair. Rows are ordered method
/// major, n minor, and are independent: with several workers the output is
/// identical to a single-worker run.
inline GridResult run_grid(const VectorDataset& li_full, const VectorDataset& u,
                           const VectorDataset& test, const GridConfig& cfg,
                           const std::function<void(const GridRow&)>& on_row = {}) {
  if (test.empty()) throw UsageError("test set is empty");
  const auto split = split_by_class(li_full);
  GridResult result;
  for (Method m : cfg.methods) {
    for (std::size_t n : cfg.n_grid) result.rows.push_back({cfg.dataset_id, m, n, {}, false, {}});
  }
  auto run_row = [&](GridRow& row) {
    if (row.n > split.n_min()) {
      row.failed = true;
      row.reason = "infeasible n: only " + std::to_string(split.n_min()) + " minority samples";
      return;
    }
    if (needs_external(row.method) && !cfg.external) {
      row.failed = true;
      row.reason = "no external synthetic source";
      return;
    }
    row.report = bootstrap(
        [&](std::uint64_t s) {
          return run_repetition(li_full, u, test, row.method, row.n, cfg, s);
        },
        cfg.repetitions, cfg.seed);
    if (row.report.completed() == 0) {
      row.failed = true;
      row.reason = row.report.failures.empty() ? "no repetitions"
                                               : row.report.failures.front().second;
    }
  };

  std::mutex progress_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < result.rows.size(); i = next++) {
      run_row(result.rows[i]);
      if (on_row) {
        std::lock_guard lock(progress_mutex);
        on_row(result.rows[i]);
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, result.rows.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return result;
}

namespace detail {
inline void append_number(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "NA";
    return;
  }
  std::array<char, 32> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), r.ptr);
}
}  // namespace detail

/// CSV with columns dataset,method,n,metric,mean,std,runtime_mean_s,repetitions,
/// one metric per line. Failed rows carry NA statistics. With
/// include_runtime = false the runtime column is NA, which makes the file a
/// pure function of inputs and seeds.
inline std::string grid_csv(const GridResult& grid, bool include_runtime = true) {
  std::string out = "dataset,method,n,metric,mean,std,runtime_mean_s,repetitions\n";
  for (const auto& row : grid.rows) {
    const std::array<std::pair<const char*, MeanStd>, 3> metrics = {
        {{"precision", row.report.precision},
         {"recall", row.report.recall},
         {"f1", row.report.f1}}};
    for (const auto& [name, stat] : metrics) {
      out += row.dataset + ',' + std::string(to_string(row.method)) + ',' +
             std::to_string(row.n) + ',' + name + ',';
      detail::append_number(out, row.failed ? NAN : stat.mean);
      out += ',';
      detail::append_number(out, row.failed ? NAN : stat.std);
      out += ',';
      detail::append_number(out, row.failed || !include_runtime ? NAN : row.runtime_mean_s());
      out += ',' + std::to_string(row.report.completed()) + '\n';
    }
  }
  return out;
}

}  // namespace semibal

#endif  // SEMIBAL_GRID_HPP
