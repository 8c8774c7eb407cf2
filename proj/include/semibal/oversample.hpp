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

#ifndef SEMIBAL_OVERSAMPLE_HPP
#define SEMIBAL_OVERSAMPLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

#include "semibal/dataset.hpp"
#include "semibal/dataset_io.hpp"
#include "semibal/errors.hpp"
#include "semibal/kdtree.hpp"
#include "semibal/random.hpp"

namespace semibal {

enum class Origin { kSmote, kAdasyn, kExternal };

inline std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::kSmote: return "smote";
    case Origin::kAdasyn: return "adasyn";
    case Origin::kExternal: return "external";
  }
  return "?";
}

/// Where a synthetic vector came from. Interpolated samples carry
/// (source, neighbor, alpha); external samples carry their file row.
struct Provenance {
  SampleId source_id = -1;
  SampleId neighbor_id = -1;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::size_t file_offset = 0;
};

struct SyntheticBatch {
  std::size_t dimension = 1;
  Origin origin = Origin::kSmote;
  std::vector<std::vector<double>> samples;
  std::vector<Provenance> provenance;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }

  /// First `count` samples (or all of them if fewer).
  SyntheticBatch head(std::size_t count) const {
    SyntheticBatch out{dimension, origin, {}, {}};
    const std::size_t m = std::min(count, size());
    out.samples.assign(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(m));
    out.provenance.assign(provenance.begin(), provenance.begin() + static_cast<std::ptrdiff_t>(m));
    return out;
  }
};

inline constexpr std::size_t kDefaultNeighbors = 2;

namespace detail {

inline std::vector<const EmbeddedSample*> sorted_by_id(const VectorDataset& ds) {
  std::vector<const EmbeddedSample*> out;
  out.reserve(ds.size());
  for (const auto& s : ds) out.push_back(&s);
  std::sort(out.begin(), out.end(),
            [](const EmbeddedSample* a, const EmbeddedSample* b) { return a->id < b->id; });
  return out;
}

// For each point, the k nearest other points of the same list (self is
// excluded by position, duplicates still count). Ties break by position.
inline std::vector<std::vector<std::size_t>> self_neighbors(
    const std::vector<const EmbeddedSample*>& pts, std::size_t dimension, std::size_t k) {
  std::vector<double> flat;
  flat.reserve(pts.size() * dimension);
  for (const auto* p : pts) flat.insert(flat.end(), p->vector.begin(), p->vector.end());
  const KdTree<double> tree(std::move(flat), dimension);
  ExclusionSet self(pts.size());
  std::vector<std::vector<std::size_t>> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    self.insert(i);
    for (const auto& nb : tree.query_knn(pts[i]->vector, k, self)) out[i].push_back(nb.index);
    self.erase(i);
  }
  return out;
}

inline std::vector<double> interpolate(const std::vector<double>& x, const std::vector<double>& nn,
                                       double alpha) {
  std::vector<double> s(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) s[j] = x[j] + alpha * (nn[j] - x[j]);
  return s;
}

inline void require_interpolatable(const VectorDataset& minority, std::size_t k) {
  if (minority.size() < 2) throw InfeasibleError("insufficient minority samples for interpolation");
  if (k == 0) throw UsageError("neighbor count k must be at least 1");
}

}  // namespace detail

/// SMOTE: `count` samples x + alpha (nn - x). Sources cycle over the minority
/// in id order; nn is drawn uniformly from the source's min(k, n-1) nearest
/// minority neighbors and alpha uniformly from [0, 1). Per sample the stream
/// is consumed as: neighbor choice, then alpha.
inline SyntheticBatch smote(const VectorDataset& minority, std::size_t count,
                            std::size_t k, std::uint64_t seed) {
  SyntheticBatch batch{minority.dimension(), Origin::kSmote, {}, {}};
  if (count == 0) return batch;
  detail::require_interpolatable(minority, k);
  const auto pts = detail::sorted_by_id(minority);
  const std::size_t k_eff = std::min(k, pts.size() - 1);
  const auto neighbors = detail::self_neighbors(pts, minority.dimension(), k_eff);
  Rng rng(seed);
  batch.samples.reserve(count);
  batch.provenance.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    const std::size_t i = c % pts.size();
    const std::size_t j = neighbors[i][rng.index(k_eff)];
    const double alpha = rng.uniform01();
    batch.samples.push_back(detail::interpolate(pts[i]->vector, pts[j]->vector, alpha));
    batch.provenance.push_back({pts[i]->id, pts[j]->id, alpha, 0});
  }
  return batch;
}

/// Splits `total` into integer parts proportional to `weights` (which should
/// sum to 1): floors first, then one extra unit each to the largest
/// fractional remainders, ties to the lower index. The parts sum to `total`.
inline std::vector<std::size_t> largest_remainder(std::span<const double> weights,
                                                  std::size_t total) {
  const std::size_t n = weights.size();
  std::vector<std::size_t> parts(n, 0);
  if (n == 0) return parts;
  std::vector<double> frac(n);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double raw = weights[i] * static_cast<double>(total);
    const double fl = std::floor(raw);
    parts[i] = static_cast<std::size_t>(fl);
    frac[i] = raw - fl;
    assigned += parts[i];
  }
  // Guard against rounding pushing the floors past the total.
  while (assigned > total) {
    const auto it = std::max_element(parts.begin(), parts.end());
    --*it;
    --assigned;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t r = 0; assigned < total; ++r, ++assigned) ++parts[order[r % n]];
  return parts;
}

/// ADASYN's per-point allocation, exposed for inspection.
struct AdasynAllocation {
  std::vector<SampleId> minority_ids;  // id order
  std::vector<double> ratios;          // r_i: majority fraction among k neighbors
  std::vector<double> density;         // Gamma_i = r_i / sum r (uniform if sum is 0)
  std::vector<std::size_t> counts;     // g_i, summing to total
  std::size_t total = 0;               // G = n_max - n_min
};

/// r_i is the fraction of majority samples among the min(k, N-1) nearest
/// neighbors of minority point i in majority ∪ minority (N points, self
/// excluded). Ties break by position with majority samples listed first.
inline AdasynAllocation adasyn_allocation(const VectorDataset& majority,
                                          const VectorDataset& minority, std::size_t k) {
  detail::require_interpolatable(minority, k);
  if (majority.size() < minority.size()) {
    throw UsageError("adasyn requires at least as many majority as minority samples");
  }
  if (majority.dimension() != minority.dimension()) throw DataError("class dimensions differ");
  const auto mins = detail::sorted_by_id(minority);
  const std::size_t n_maj = majority.size();
  const std::size_t n_all = n_maj + mins.size();
  std::vector<double> flat;
  flat.reserve(n_all * minority.dimension());
  for (const auto& s : majority) flat.insert(flat.end(), s.vector.begin(), s.vector.end());
  for (const auto* p : mins) flat.insert(flat.end(), p->vector.begin(), p->vector.end());
  const KdTree<double> tree(std::move(flat), minority.dimension());

  AdasynAllocation a;
  a.total = n_maj - mins.size();
  const std::size_t k_ratio = std::min(k, n_all - 1);
  ExclusionSet self(n_all);
  double sum = 0.0;
  for (std::size_t i = 0; i < mins.size(); ++i) {
    self.insert(n_maj + i);
    std::size_t majority_hits = 0;
    for (const auto& nb : tree.query_knn(mins[i]->vector, k_ratio, self)) {
      if (nb.index < n_maj) ++majority_hits;
    }
    self.erase(n_maj + i);
    a.minority_ids.push_back(mins[i]->id);
    a.ratios.push_back(static_cast<double>(majority_hits) / static_cast<double>(k_ratio));
    sum += a.ratios.back();
  }
  a.density.resize(mins.size());
  for (std::size_t i = 0; i < mins.size(); ++i) {
    a.density[i] = sum > 0.0 ? a.ratios[i] / sum : 1.0 / static_cast<double>(mins.size());
  }
  a.counts = largest_remainder(a.density, a.total);
  return a;
}

/// ADASYN: G = n_max - n_min samples, g_i per minority point from
/// adasyn_allocation, each made by the SMOTE step toward one of the point's
/// min(k, n_min-1) nearest minority neighbors. Points are visited in id
/// order; per sample the stream is consumed as: neighbor choice, then alpha.
inline SyntheticBatch adasyn(const VectorDataset& majority, const VectorDataset& minority,
                             std::size_t k, std::uint64_t seed) {
  const AdasynAllocation alloc = adasyn_allocation(majority, minority, k);
  SyntheticBatch batch{minority.dimension(), Origin::kAdasyn, {}, {}};
  if (alloc.total == 0) return batch;
  const auto pts = detail::sorted_by_id(minority);
  const std::size_t k_eff = std::min(k, pts.size() - 1);
  const auto neighbors = detail::self_neighbors(pts, minority.dimension(), k_eff);
  Rng rng(seed);
  batch.samples.reserve(alloc.total);
  batch.provenance.reserve(alloc.total);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t g = 0; g < alloc.counts[i]; ++g) {
      const std::size_t j = neighbors[i][rng.index(k_eff)];
      const double alpha = rng.uniform01();
      batch.samples.push_back(detail::interpolate(pts[i]->vector, pts[j]->vector, alpha));
      batch.provenance.push_back({pts[i]->id, pts[j]->id, alpha, 0});
    }
  }
  return batch;
}

/// Wraps vectors produced by an outside generator (e.g. a VAE-GAN).
inline SyntheticBatch external_batch(const VectorDataset& vectors) {
  SyntheticBatch batch{vectors.dimension(), Origin::kExternal, {}, {}};
  batch.samples.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    batch.samples.push_back(vectors[i].vector);
    batch.provenance.push_back({-1, -1, std::numeric_limits<double>::quiet_NaN(), i});
  }
  return batch;
}

/// Reads generator output stored in the unlabeled dataset formats.
inline SyntheticBatch load_external_synthetics(const std::filesystem::path& path,
                                               std::size_t dimension,
                                               Format format = Format::kCsv,
                                               const CsvOptions& csv = {}) {
  return external_batch(load_dataset(path, format, Role::kU, dimension, csv));
}

}  // namespace semibal

#endif  // SEMIBAL_OVERSAMPLE_HPP
