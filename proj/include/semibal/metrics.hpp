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

#ifndef SEMIBAL_METRICS_HPP
#define SEMIBAL_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semibal/errors.hpp"

namespace semibal {

/// Precision, recall and F1 of the positive (minority) class.
struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

/// Zero denominators yield 0 for the affected metric; F1 is 0 when P+R = 0.
inline MetricsReport compute_metrics(std::span<const int> predictions, std::span<const int> labels,
                                     int positive = 1) {
  if (predictions.size() != labels.size()) {
    throw UsageError("predictions and labels differ in length");
  }
  if (predictions.empty()) throw UsageError("cannot score an empty prediction set");
  MetricsReport m;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool pred = predictions[i] == positive;
    const bool truth = labels[i] == positive;
    if (pred && truth) ++m.tp;
    else if (pred) ++m.fp;
    else if (truth) ++m.fn;
    else ++m.tn;
  }
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  m.precision = ratio(m.tp, m.tp + m.fp);
  m.recall = ratio(m.tp, m.tp + m.fn);
  const double pr = m.precision + m.recall;
  m.f1 = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
  return m;
}

struct MeanStd {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double std = std::numeric_limits<double>::quiet_NaN();
};

/// Mean and population standard deviation. The mean is accumulated as
/// offsets from the first value (so constant inputs give that value exactly)
/// and clamped to [min, max].
inline MeanStd mean_std(std::span<const double> xs) {
  MeanStd out;
  if (xs.empty()) return out;
  const double x0 = xs.front();
  double shift = 0.0;
  for (double x : xs) shift += x - x0;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  out.mean = std::clamp(x0 + shift / static_cast<double>(xs.size()), *lo, *hi);
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(ss / static_cast<double>(xs.size()));
  return out;
}

/// One repetition of an experiment.
struct RepetitionOutcome {
  MetricsReport metrics;
  double runtime_seconds = 0.0;
};

struct BootstrapReport {
  MeanStd precision;
  MeanStd recall;
  MeanStd f1;
  MeanStd runtime_seconds;
  std::size_t requested = 0;                 // R
  std::vector<MetricsReport> values;         // successful repetitions, in order
  std::vector<double> runtimes;
  std::vector<std::pair<std::size_t, std::string>> failures;  // (repetition, reason)

  std::size_t completed() const { return values.size(); }
  bool partial() const { return !failures.empty(); }
};

/// Runs `run` with seeds base, base+1, ..., base+R-1 and aggregates the
/// metrics. A repetition that throws is recorded in `failures`; the
/// statistics cover the repetitions that completed.
inline BootstrapReport bootstrap(const std::function<RepetitionOutcome(std::uint64_t)>& run,
                                 std::size_t repetitions = 100, std::uint64_t base_seed = 0) {
  BootstrapReport report;
  report.requested = repetitions;
  for (std::size_t r = 0; r < repetitions; ++r) {
    try {
      const RepetitionOutcome o = run(base_seed + r);
      report.values.push_back(o.metrics);
      report.runtimes.push_back(o.runtime_seconds);
    } catch (const std::exception& e) {
      report.failures.emplace_back(r, e.what());
    }
  }
  std::vector<double> p, rc, f;
  for (const auto& m : report.values) {
    p.push_back(m.precision);
    rc.push_back(m.recall);
    f.push_back(m.f1);
  }
  report.precision = mean_std(p);
  report.recall = mean_std(rc);
  report.f1 = mean_std(f);
  report.runtime_seconds = mean_std(report.runtimes);
  return report;
}

}  // namespace semibal

#endif  // SEMIBAL_METRICS_HPP
