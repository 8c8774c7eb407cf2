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

#ifndef SEMIBAL_REBALANCE_HPP
#define SEMIBAL_REBALANCE_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "semibal/dataset.hpp"
#include "semibal/dataset_io.hpp"
#include "semibal/errors.hpp"
#include "semibal/kdtree.hpp"
#include "semibal/oversample.hpp"

namespace semibal {

enum class Method {
  kOriginal,
  kSmote,
  kAdasyn,
  kExternalSynthetic,
  kKdDirect,
  kSmoteKd,
  kAdasynKd,
  kReplaceExternal,
};

inline constexpr std::array<Method, 8> kAllMethods = {
    Method::kOriginal,  Method::kSmote,   Method::kAdasyn,   Method::kExternalSynthetic,
    Method::kKdDirect,  Method::kSmoteKd, Method::kAdasynKd, Method::kReplaceExternal};

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::kOriginal: return "original";
    case Method::kSmote: return "smote";
    case Method::kAdasyn: return "adasyn";
    case Method::kExternalSynthetic: return "external-synthetic";
    case Method::kKdDirect: return "kd-direct";
    case Method::kSmoteKd: return "smote-kd";
    case Method::kAdasynKd: return "adasyn-kd";
    case Method::kReplaceExternal: return "replace-external";
  }
  return "?";
}

inline Method method_from_string(std::string_view s) {
  for (Method m : kAllMethods) {
    if (to_string(m) == s) return m;
  }
  throw UsageError("unknown method '" + std::string(s) + "'");
}

/// True for methods whose added samples are real points taken from U.
inline bool selects_from_pool(Method m) {
  return m == Method::kKdDirect || m == Method::kSmoteKd || m == Method::kAdasynKd ||
         m == Method::kReplaceExternal;
}

inline bool needs_external(Method m) {
  return m == Method::kExternalSynthetic || m == Method::kReplaceExternal;
}

struct RebalancePlan {
  Method method = Method::kOriginal;
  // kd-direct: per minority point (id order). Indirect: per query point,
  // originals then synthetic seeds. Synthetic-only: per source point.
  std::vector<std::size_t> quotas;
  std::size_t n_max = 0;
  std::size_t n_min = 0;
  std::size_t n_aug = 0;
};

struct SelectionEntry {
  std::string query_id;  // minority id, or "syn:<batch index>" for a synthetic seed
  SampleId selected_id = 0;  // id of the sample added to LB
  double distance = std::numeric_limits<double>::quiet_NaN();
};

struct SelectionRecord {
  Method method = Method::kOriginal;
  std::vector<SelectionEntry> entries;
  std::size_t queries = 0;
  QueryStats stats;
  std::vector<std::string> warnings;
};

struct RebalanceOptions {
  std::size_t k = kDefaultNeighbors;
  std::size_t leaf_capacity = KdTree<double>::kDefaultLeafCapacity;
};

struct RebalanceResult {
  VectorDataset lb;
  SelectionRecord record;
  RebalancePlan plan;
};

/// `total` split over `parts` slots: floor(total/parts) each, the remainder
/// one apiece to the first slots.
inline std::vector<std::size_t> spread_evenly(std::size_t total, std::size_t parts) {
  std::vector<std::size_t> out(parts, parts ? total / parts : 0);
  for (std::size_t i = 0; i < (parts ? total % parts : 0); ++i) ++out[i];
  return out;
}

/// Per-minority-point augmentation counts n_aug_i, summing to n_max - n_min.
inline std::vector<std::size_t> allocate_quota(std::size_t n_max, std::size_t n_min) {
  if (n_min == 0) throw InfeasibleError("no minority seeds");
  if (n_max < n_min) throw UsageError("n_max must be at least n_min");
  return spread_evenly(n_max - n_min, n_min);
}

namespace detail {

struct Prepared {
  ClassSplit split;
  std::vector<const EmbeddedSample*> minority;  // id order
  std::size_t deficit = 0;
};

inline Prepared prepare(const VectorDataset& li) {
  Prepared p{split_by_class(li), {}, 0};
  p.minority = sorted_by_id(p.split.minority);
  p.deficit = p.split.n_max() - p.split.n_min();
  return p;
}

inline std::vector<EmbeddedSample> lb_base(const VectorDataset& li) { return li.samples(); }

inline RebalanceResult unchanged(const VectorDataset& li, Method method, const Prepared& p) {
  RebalanceResult r{li.with_role(Role::kLB), {}, {}};
  r.record.method = method;
  r.plan = {method, std::vector<std::size_t>(method == Method::kOriginal ? 0 : p.split.n_min(), 0),
            p.split.n_max(), p.split.n_min(), 0};
  return r;
}

inline void check_pool(const VectorDataset& li, const VectorDataset& u, std::size_t deficit) {
  if (u.dimension() != li.dimension()) {
    throw DataError("unlabeled pool has dimension " + std::to_string(u.dimension()) +
                    ", labeled set has " + std::to_string(li.dimension()));
  }
  if (u.size() < deficit) {
    throw InfeasibleError("unlabeled pool holds " + std::to_string(u.size()) + " points but " +
                          std::to_string(deficit) + " are needed (shortfall " +
                          std::to_string(deficit - u.size()) + ")");
  }
  std::unordered_set<SampleId> li_ids;
  for (const auto& s : li) li_ids.insert(s.id);
  for (const auto& s : u) {
    if (li_ids.contains(s.id)) {
      throw DataError("sample id " + std::to_string(s.id) +
                      " appears in both the labeled set and the unlabeled pool");
    }
  }
}

struct Query {
  std::string id;
  const std::vector<double>* vector;
  std::size_t quota;
};

// Runs queries in order against a tree over U, each taking up to its quota
// of nearest unselected points, until `needed` points are selected.
inline RebalanceResult select_from_pool(const VectorDataset& li, const VectorDataset& u,
                                        const Prepared& p, Method method,
                                        const std::vector<Query>& queries,
                                        const RebalanceOptions& opts) {
  const KdTree<double> tree(flatten(u), u.dimension(), opts.leaf_capacity);
  ExclusionSet selected(u.size());
  auto samples = lb_base(li);
  RebalanceResult r;
  r.record.method = method;
  r.plan = {method, {}, p.split.n_max(), p.split.n_min(), p.deficit};
  std::size_t remaining = p.deficit;
  for (const auto& q : queries) {
    const std::size_t take = std::min(q.quota, remaining);
    r.plan.quotas.push_back(take);
    if (take == 0) continue;
    QueryStats st;
    const auto found = tree.query_knn(*q.vector, take, selected, &st);
    r.record.stats += st;
    ++r.record.queries;
    for (const auto& nb : found) {
      selected.insert(nb.index);
      const auto& src = u[nb.index];
      samples.push_back({src.id, src.vector, p.split.minority_label});
      r.record.entries.push_back({q.id, src.id, nb.distance});
    }
    remaining -= found.size();
  }
  r.lb = VectorDataset(li.dimension(), Role::kLB, std::move(samples));
  return r;
}

}  // namespace detail

/// Direct route: a kd-tree over U, queried by each minority point (id order)
/// for its quota of nearest points not yet selected. Selected points keep
/// their U ids and take the minority label.
inline RebalanceResult rebalance_direct(const VectorDataset& li, const VectorDataset& u,
                                        const RebalanceOptions& opts = {}) {
  const auto p = detail::prepare(li);
  const auto quotas = allocate_quota(p.split.n_max(), p.split.n_min());
  if (p.deficit == 0) return detail::unchanged(li, Method::kKdDirect, p);
  detail::check_pool(li, u, p.deficit);
  std::vector<detail::Query> queries;
  for (std::size_t i = 0; i < p.minority.size(); ++i) {
    queries.push_back({std::to_string(p.minority[i]->id), &p.minority[i]->vector, quotas[i]});
  }
  return detail::select_from_pool(li, u, p, Method::kKdDirect, queries, opts);
}

/// Indirect route: synthetic seeds steer the search but never enter LB.
///
/// Query order is the original minority points (id order), then the seeds
/// in batch order. Each seed asks for one point. Each original asks for its
/// share of (deficit - seeds) spread evenly, and at least one. Queries stop
/// once the deficit is covered, so late seeds may select nothing. An empty
/// batch degenerates to the direct route and records a warning.
inline RebalanceResult rebalance_indirect(const VectorDataset& li, const VectorDataset& u,
                                          const SyntheticBatch& seeds, Method method,
                                          const RebalanceOptions& opts = {}) {
  const auto p = detail::prepare(li);
  if (p.split.n_min() == 0) throw InfeasibleError("no minority seeds");
  if (p.deficit == 0) return detail::unchanged(li, method, p);
  detail::check_pool(li, u, p.deficit);
  if (!seeds.empty() && seeds.dimension != li.dimension()) {
    throw DataError("synthetic seeds have dimension " + std::to_string(seeds.dimension) +
                    ", labeled set has " + std::to_string(li.dimension()));
  }
  const std::size_t s = seeds.size();
  const auto original_quota =
      spread_evenly(s >= p.deficit ? 0 : p.deficit - s, p.split.n_min());
  std::vector<detail::Query> queries;
  for (std::size_t i = 0; i < p.minority.size(); ++i) {
    queries.push_back({std::to_string(p.minority[i]->id), &p.minority[i]->vector,
                       std::max<std::size_t>(1, original_quota[i])});
  }
  for (std::size_t j = 0; j < s; ++j) {
    queries.push_back({"syn:" + std::to_string(j), &seeds.samples[j], 1});
  }
  auto r = detail::select_from_pool(li, u, p, method, queries, opts);
  if (s == 0) {
    r.record.warnings.push_back("empty synthetic seed batch; using direct selection");
  }
  return r;
}

/// Synthetic route: the first n_max - n_min samples of `batch` join LI with
/// the minority label and fresh ids above every LI id.
inline RebalanceResult rebalance_synthetic(const VectorDataset& li, const SyntheticBatch& batch,
                                           Method method) {
  const auto p = detail::prepare(li);
  if (p.deficit == 0) return detail::unchanged(li, method, p);
  if (batch.size() < p.deficit) {
    throw InfeasibleError("synthetic batch holds " + std::to_string(batch.size()) +
                          " samples but " + std::to_string(p.deficit) + " are needed");
  }
  if (batch.dimension != li.dimension()) throw DataError("synthetic batch dimension mismatch");
  auto samples = detail::lb_base(li);
  RebalanceResult r;
  r.record.method = method;
  r.plan = {method, {}, p.split.n_max(), p.split.n_min(), p.deficit};
  if (batch.origin == Origin::kExternal) {
    r.plan.quotas = {p.deficit};
  } else {
    r.plan.quotas.assign(p.minority.size(), 0);
  }
  SampleId next_id = li.max_id() + 1;
  for (std::size_t j = 0; j < p.deficit; ++j) {
    const auto& prov = batch.provenance[j];
    if (batch.origin != Origin::kExternal) {
      const auto it = std::find_if(p.minority.begin(), p.minority.end(),
                                   [&](const EmbeddedSample* m) { return m->id == prov.source_id; });
      if (it != p.minority.end()) ++r.plan.quotas[static_cast<std::size_t>(it - p.minority.begin())];
    }
    samples.push_back({next_id, batch.samples[j], p.split.minority_label});
    r.record.entries.push_back(
        {batch.origin == Origin::kExternal ? "ext:" + std::to_string(prov.file_offset)
                                           : std::to_string(prov.source_id),
         next_id, std::numeric_limits<double>::quiet_NaN()});
    ++next_id;
  }
  r.lb = VectorDataset(li.dimension(), Role::kLB, std::move(samples));
  return r;
}

/// Forms LB with any method. `external` supplies generator output for the
/// external-synthetic and replace-external methods.
inline RebalanceResult rebalance(Method method, const VectorDataset& li, const VectorDataset& u,
                                 const RebalanceOptions& opts, std::uint64_t seed,
                                 const SyntheticBatch* external = nullptr) {
  const auto p = detail::prepare(li);
  if (method == Method::kOriginal) return detail::unchanged(li, method, p);
  if (needs_external(method) && external == nullptr) {
    throw UsageError(std::string(to_string(method)) + " needs an external synthetic batch");
  }
  if (p.split.n_min() == 0) throw InfeasibleError("no minority seeds");
  if (p.deficit == 0) return detail::unchanged(li, method, p);
  switch (method) {
    case Method::kSmote:
      return rebalance_synthetic(li, smote(p.split.minority, p.deficit, opts.k, seed), method);
    case Method::kAdasyn:
      return rebalance_synthetic(li, adasyn(p.split.majority, p.split.minority, opts.k, seed),
                                 method);
    case Method::kExternalSynthetic:
      return rebalance_synthetic(li, *external, method);
    case Method::kKdDirect:
      return rebalance_direct(li, u, opts);
    case Method::kSmoteKd:
      detail::check_pool(li, u, p.deficit);
      return rebalance_indirect(li, u, smote(p.split.minority, p.deficit, opts.k, seed), method,
                                opts);
    case Method::kAdasynKd:
      detail::check_pool(li, u, p.deficit);
      return rebalance_indirect(li, u, adasyn(p.split.majority, p.split.minority, opts.k, seed),
                                method, opts);
    case Method::kReplaceExternal:
      return rebalance_indirect(li, u, external->head(p.deficit), method, opts);
    case Method::kOriginal:
      break;
  }
  return detail::unchanged(li, method, p);
}

/// CSV with columns query_id,selected_id,distance,method. Distance is empty
/// for synthetic additions.
inline std::string selection_csv(const SelectionRecord& record) {
  std::string out = "query_id,selected_id,distance,method\n";
  for (const auto& e : record.entries) {
    out += e.query_id + ',' + std::to_string(e.selected_id) + ',';
    if (!std::isnan(e.distance)) {
      std::array<char, 32> buf{};
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), e.distance);
      out.append(buf.data(), res.ptr);
    }
    out += ',';
    out += to_string(record.method);
    out += '\n';
  }
  return out;
}

inline void write_selection_csv(const SelectionRecord& record, const std::filesystem::path& path) {
  detail::write_file(path, selection_csv(record));
}

}  // namespace semibal

#endif  // SEMIBAL_REBALANCE_HPP
