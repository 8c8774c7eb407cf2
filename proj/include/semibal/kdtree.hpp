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

#ifndef SEMIBAL_KDTREE_HPP
#define SEMIBAL_KDTREE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semibal/errors.hpp"

namespace semibal {

/// Per-query traversal counters.
struct QueryStats {
  std::size_t nodes_visited = 0;
  std::size_t points_scanned = 0;

  QueryStats& operator+=(const QueryStats& o) {
    nodes_visited += o.nodes_visited;
    points_scanned += o.points_scanned;
    return *this;
  }
};

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Set of point indices to skip during a query.
class ExclusionSet {
 public:
  ExclusionSet() = default;
  explicit ExclusionSet(std::size_t universe) : mask_(universe, false) {}

  /// Returns false if `i` was already present.
  bool insert(std::size_t i) {
    if (i >= mask_.size()) throw UsageError("exclusion index out of range");
    if (mask_[i]) return false;
    mask_[i] = true;
    ++count_;
    return true;
  }

  /// Returns false if `i` was not present.
  bool erase(std::size_t i) {
    if (!contains(i)) return false;
    mask_[i] = false;
    --count_;
    return true;
  }

  bool contains(std::size_t i) const { return i < mask_.size() && mask_[i]; }
  std::size_t size() const { return count_; }
  std::size_t universe() const { return mask_.size(); }

 private:
  std::vector<bool> mask_;
  std::size_t count_ = 0;
};

/// K-D tree that splits each node on its highest-variance dimension at the
/// lower median, answering exact k-nearest-neighbor queries under Euclidean
/// distance.
///
/// Partition rule: points with coordinate < split_value go left, the rest go
/// right. When the lower median equals the node minimum (nothing would go
/// left), the split value moves up to the next distinct coordinate so the
/// median-valued points form the left side. A dimension with no distinct
/// values cannot split; the next one by variance is tried, and a node whose
/// points are all identical becomes a multi-point leaf.
///
/// Results are ordered by (distance, point index), so ties are total and
/// query output equals a brute-force scan exactly. The tree is immutable
/// after build and safe to query from several threads.
template <class T = double>
class KdTree {
 public:
  static constexpr std::size_t kDefaultLeafCapacity = 16;
  static constexpr std::int32_t kNoChild = -1;

  struct Node {
    std::size_t split_dim = 0;
    T split_value{};
    std::int32_t left = kNoChild;
    std::int32_t right = kNoChild;
    // Range into point_order() covered by this node.
    std::size_t begin = 0;
    std::size_t end = 0;

    bool is_leaf() const { return left == kNoChild; }
  };

  KdTree() = default;

  /// Builds over row-major coordinates (n x dimension).
  KdTree(std::vector<T> coords, std::size_t dimension,
         std::size_t leaf_capacity = kDefaultLeafCapacity)
      : dim_(dimension), leaf_capacity_(leaf_capacity), coords_(std::move(coords)) {
    if (dim_ == 0) throw UsageError("kd-tree dimension must be positive");
    if (leaf_capacity_ == 0) throw UsageError("leaf capacity must be positive");
    if (coords_.size() % dim_ != 0) throw DataError("coordinate count is not a multiple of dimension");
    n_ = coords_.size() / dim_;
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (n_ > 0) {
      scratch_.resize(n_);
      build_node(0, n_);
      scratch_.clear();
      scratch_.shrink_to_fit();
    }
  }

  /// Builds over a list of equal-length vectors.
  static KdTree build(std::span<const std::vector<T>> points,
                      std::size_t leaf_capacity = kDefaultLeafCapacity) {
    const std::size_t d = points.empty() ? 1 : points.front().size();
    std::vector<T> flat;
    flat.reserve(points.size() * d);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].size() != d) {
        throw DataError("point " + std::to_string(i) + " has dimension " +
                        std::to_string(points[i].size()) + ", expected " + std::to_string(d));
      }
      flat.insert(flat.end(), points[i].begin(), points[i].end());
    }
    return KdTree(std::move(flat), d, leaf_capacity);
  }

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }
  std::size_t dimension() const { return dim_; }
  std::size_t leaf_capacity() const { return leaf_capacity_; }

  std::span<const T> point(std::size_t i) const {
    return std::span<const T>(coords_).subspan(i * dim_, dim_);
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<std::size_t>& point_order() const { return order_; }

  std::span<const std::size_t> node_points(const Node& node) const {
    return std::span<const std::size_t>(order_).subspan(node.begin, node.end - node.begin);
  }

  /// The k nearest non-excluded points, sorted by (distance, index).
  /// Returns min(k, n - |exclude|) results.
  std::vector<Neighbor> query_knn(std::span<const T> q, std::size_t k,
                                  const ExclusionSet& exclude = {},
                                  QueryStats* stats = nullptr) const {
    check_query(q, k, exclude);
    const std::size_t want = std::min(k, n_ - exclude.size());
    Search s{q, want, exclude, {}, {}};
    descend(0, s);
    if (stats) *stats = s.stats;
    std::vector<Candidate> found;
    found.reserve(s.heap.size());
    while (!s.heap.empty()) {
      found.push_back(s.heap.top());
      s.heap.pop();
    }
    std::vector<Neighbor> out;
    out.reserve(found.size());
    for (auto it = found.rbegin(); it != found.rend(); ++it) {
      out.push_back({it->index, std::sqrt(it->dist2)});
    }
    return out;
  }

  std::vector<Neighbor> query_knn(std::span<const T> q, std::size_t k,
                                  std::span<const std::size_t> exclude) const {
    ExclusionSet set(n_);
    for (std::size_t i : exclude) set.insert(i);
    return query_knn(q, k, set);
  }

  /// Runs the same traversal as query_knn and returns only the counters.
  QueryStats query_stats(std::span<const T> q, std::size_t k,
                         const ExclusionSet& exclude = {}) const {
    QueryStats stats;
    query_knn(q, k, exclude, &stats);
    return stats;
  }

  /// Indented text rendering of the tree, one node per line.
  std::string dump() const {
    std::string out;
    if (n_ > 0) dump_node(0, 0, out);
    return out;
  }

  /// Squared Euclidean distance accumulated in index order.
  static double squared_distance(std::span<const T> a, std::span<const T> b) {
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double diff = static_cast<double>(a[j]) - static_cast<double>(b[j]);
      sum += diff * diff;
    }
    return sum;
  }

 private:
  struct Candidate {
    double dist2;
    std::size_t index;
    bool operator<(const Candidate& o) const {
      return dist2 < o.dist2 || (dist2 == o.dist2 && index < o.index);
    }
  };

  struct Search {
    std::span<const T> q;
    std::size_t k;
    const ExclusionSet& exclude;
    std::priority_queue<Candidate> heap;  // max-heap: worst candidate on top
    QueryStats stats;
  };

  void check_query(std::span<const T> q, std::size_t k, const ExclusionSet& exclude) const {
    if (k == 0) throw UsageError("k must be at least 1");
    if (n_ == 0) throw InfeasibleError("query on an empty kd-tree");
    if (q.size() != dim_) {
      throw DataError("query has dimension " + std::to_string(q.size()) + ", tree has " +
                      std::to_string(dim_));
    }
    if (exclude.universe() > n_) throw UsageError("exclusion set larger than the tree");
    if (exclude.size() >= n_) throw InfeasibleError("every point of the kd-tree is excluded");
  }

  void descend(std::size_t node_index, Search& s) const {
    const Node& node = nodes_[node_index];
    ++s.stats.nodes_visited;
    if (node.is_leaf()) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t idx = order_[i];
        ++s.stats.points_scanned;
        if (s.exclude.contains(idx)) continue;
        const Candidate c{squared_distance(s.q, point(idx)), idx};
        if (s.heap.size() < s.k) {
          s.heap.push(c);
        } else if (c < s.heap.top()) {
          s.heap.pop();
          s.heap.push(c);
        }
      }
      return;
    }
    const double diff = static_cast<double>(s.q[node.split_dim]) -
                        static_cast<double>(node.split_value);
    const auto near = static_cast<std::size_t>(diff < 0 ? node.left : node.right);
    const auto far = static_cast<std::size_t>(diff < 0 ? node.right : node.left);
    descend(near, s);
    if (s.heap.size() < s.k || diff * diff <= s.heap.top().dist2) descend(far, s);
  }

  T coord(std::size_t point_index, std::size_t d) const { return coords_[point_index * dim_ + d]; }

  std::int32_t build_node(std::size_t begin, std::size_t end) {
    const auto self = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{0, T{}, kNoChild, kNoChild, begin, end});
    const std::size_t m = end - begin;
    if (m <= leaf_capacity_) return self;

    // Per-dimension population variance; exactly zero when all values agree.
    std::vector<std::pair<double, std::size_t>> by_variance(dim_);
    for (std::size_t d = 0; d < dim_; ++d) {
      T lo = coord(order_[begin], d), hi = lo;
      double mean = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        const T v = coord(order_[i], d);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        mean += static_cast<double>(v);
      }
      double var = 0.0;
      if (lo != hi) {
        mean /= static_cast<double>(m);
        for (std::size_t i = begin; i < end; ++i) {
          const double dv = static_cast<double>(coord(order_[i], d)) - mean;
          var += dv * dv;
        }
        var /= static_cast<double>(m);
      }
      by_variance[d] = {var, d};
    }
    std::stable_sort(by_variance.begin(), by_variance.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    for (const auto& [var, d] : by_variance) {
      T split{};
      if (!choose_split(begin, end, d, split)) continue;
      const auto mid_it = std::stable_partition(
          order_.begin() + static_cast<std::ptrdiff_t>(begin),
          order_.begin() + static_cast<std::ptrdiff_t>(end),
          [&](std::size_t idx) { return coord(idx, d) < split; });
      const auto mid = static_cast<std::size_t>(mid_it - order_.begin());
      nodes_[static_cast<std::size_t>(self)].split_dim = d;
      nodes_[static_cast<std::size_t>(self)].split_value = split;
      const std::int32_t left = build_node(begin, mid);
      const std::int32_t right = build_node(mid, end);
      nodes_[static_cast<std::size_t>(self)].left = left;
      nodes_[static_cast<std::size_t>(self)].right = right;
      return self;
    }
    return self;  // all points identical
  }

  // Lower median, bumped to the next distinct value when it is the minimum.
  // Returns false if dimension d holds a single distinct value.
  bool choose_split(std::size_t begin, std::size_t end, std::size_t d, T& split) {
    const std::size_t m = end - begin;
    for (std::size_t i = 0; i < m; ++i) scratch_[i] = coord(order_[begin + i], d);
    const auto first = scratch_.begin();
    const auto median_it = first + static_cast<std::ptrdiff_t>((m - 1) / 2);
    std::nth_element(first, median_it, first + static_cast<std::ptrdiff_t>(m));
    const T median = *median_it;
    bool any_below = false;
    bool any_above = false;
    T next_above{};
    for (std::size_t i = 0; i < m; ++i) {
      const T v = scratch_[i];
      if (v < median) {
        any_below = true;
      } else if (median < v && (!any_above || v < next_above)) {
        next_above = v;
        any_above = true;
      }
    }
    if (any_below) {
      split = median;
      return true;
    }
    if (any_above) {
      split = next_above;
      return true;
    }
    return false;
  }

  void dump_node(std::size_t index, std::size_t depth, std::string& out) const {
    const Node& node = nodes_[index];
    out.append(2 * depth, ' ');
    if (node.is_leaf()) {
      out += "leaf [";
      for (std::size_t i = node.begin; i < node.end; ++i) {
        if (i != node.begin) out += ' ';
        out += std::to_string(order_[i]);
      }
      out += "]\n";
      return;
    }
    out += "split dim=" + std::to_string(node.split_dim) +
           " value=" + std::to_string(static_cast<double>(node.split_value)) +
           " n=" + std::to_string(node.end - node.begin) + "\n";
    dump_node(static_cast<std::size_t>(node.left), depth + 1, out);
    dump_node(static_cast<std::size_t>(node.right), depth + 1, out);
  }

  std::size_t dim_ = 1;
  std::size_t n_ = 0;
  std::size_t leaf_capacity_ = kDefaultLeafCapacity;
  std::vector<T> coords_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  std::vector<T> scratch_;
};

}  // namespace semibal

#endif  // SEMIBAL_KDTREE_HPP
