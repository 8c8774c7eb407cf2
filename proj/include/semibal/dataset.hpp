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

#ifndef SEMIBAL_DATASET_HPP
#define SEMIBAL_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "semibal/errors.hpp"

namespace semibal {

using SampleId = std::int64_t;

/// Binary class label. Label 1 ("unreliable") is the minority by convention.
enum class Label : std::uint8_t { kMajority = 0, kMinority = 1 };

inline int label_value(Label l) { return static_cast<int>(l); }

inline Label label_from_int(long long v) {
  if (v != 0 && v != 1) {
    throw DataError("label must be 0 or 1, got " + std::to_string(v));
  }
  return static_cast<Label>(v);
}

inline Label other(Label l) {
  return l == Label::kMajority ? Label::kMinority : Label::kMajority;
}

/// LI: labeled imbalanced, U: unlabeled pool, LB: labeled balanced.
enum class Role { kLI, kU, kLB, kTest };

inline bool is_labeled(Role r) { return r != Role::kU; }

inline std::string_view to_string(Role r) {
  switch (r) {
    case Role::kLI: return "LI";
    case Role::kU: return "U";
    case Role::kLB: return "LB";
    case Role::kTest: return "Test";
  }
  return "?";
}

inline Role role_from_string(std::string_view s) {
  if (s == "LI") return Role::kLI;
  if (s == "U") return Role::kU;
  if (s == "LB") return Role::kLB;
  if (s == "Test") return Role::kTest;
  throw UsageError("unknown dataset role '" + std::string(s) + "'");
}

struct EmbeddedSample {
  SampleId id = 0;
  std::vector<double> vector;
  std::optional<Label> label;
};

/// An ordered set of embedding vectors sharing one dimension and one role.
///
/// Construction goes through validate(), after which the dataset is treated
/// as immutable by every operation in the library.
class VectorDataset {
 public:
  VectorDataset() = default;

  VectorDataset(std::size_t dimension, Role role,
                std::vector<EmbeddedSample> samples = {})
      : dimension_(dimension), role_(role), samples_(std::move(samples)) {
    validate();
  }

  std::size_t dimension() const { return dimension_; }
  Role role() const { return role_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  const std::vector<EmbeddedSample>& samples() const { return samples_; }
  const EmbeddedSample& operator[](std::size_t i) const { return samples_[i]; }

  auto begin() const { return samples_.begin(); }
  auto end() const { return samples_.end(); }

  std::size_t count(Label l) const {
    return static_cast<std::size_t>(
        std::count_if(samples_.begin(), samples_.end(),
                      [l](const EmbeddedSample& s) { return s.label == l; }));
  }

  /// Largest id in the dataset, or -1 when empty.
  SampleId max_id() const {
    SampleId m = -1;
    for (const auto& s : samples_) m = std::max(m, s.id);
    return m;
  }

  /// Same samples under a different role; re-validated.
  VectorDataset with_role(Role role) const {
    return VectorDataset(dimension_, role, samples_);
  }

  /// Throws DataError if any invariant is violated.
  void validate() const {
    if (dimension_ == 0) throw DataError("dataset dimension must be positive");
    std::unordered_set<SampleId> ids;
    ids.reserve(samples_.size());
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      const auto& s = samples_[i];
      if (s.vector.size() != dimension_) {
        throw DataError("sample " + std::to_string(i) + " has dimension " +
                        std::to_string(s.vector.size()) + ", expected " +
                        std::to_string(dimension_));
      }
      for (double v : s.vector) {
        if (!std::isfinite(v)) {
          throw DataError("sample " + std::to_string(i) +
                          " has a non-finite coordinate");
        }
      }
      if (is_labeled(role_) && !s.label) {
        throw DataError("sample " + std::to_string(i) + " is unlabeled in a " +
                        std::string(to_string(role_)) + " dataset");
      }
      if (!is_labeled(role_) && s.label) {
        throw DataError("sample " + std::to_string(i) +
                        " carries a label in an unlabeled dataset");
      }
      if (!ids.insert(s.id).second) {
        throw DataError("duplicate sample id " + std::to_string(s.id));
      }
    }
  }

 private:
  std::size_t dimension_ = 1;
  Role role_ = Role::kU;
  std::vector<EmbeddedSample> samples_;
};

/// Result of separating a labeled dataset into its two classes.
struct ClassSplit {
  VectorDataset majority;
  VectorDataset minority;
  Label minority_label = Label::kMinority;

  std::size_t n_max() const { return majority.size(); }
  std::size_t n_min() const { return minority.size(); }
};

/// Partitions by label. The minority is the strictly smaller class; on a tie
/// label 1 is the minority. Sample order is preserved within each side.
inline ClassSplit split_by_class(const VectorDataset& li) {
  if (!is_labeled(li.role())) {
    throw UsageError("split_by_class needs a labeled dataset");
  }
  const std::size_t zeros = li.count(Label::kMajority);
  const std::size_t ones = li.size() - zeros;
  const Label minority_label =
      zeros < ones ? Label::kMajority : Label::kMinority;
  std::vector<EmbeddedSample> maj, min;
  for (const auto& s : li) {
    (*s.label == minority_label ? min : maj).push_back(s);
  }
  return ClassSplit{VectorDataset(li.dimension(), li.role(), std::move(maj)),
                    VectorDataset(li.dimension(), li.role(), std::move(min)),
                    minority_label};
}

/// Scales every vector to unit Euclidean norm; zero vectors are left as is.
inline VectorDataset normalize_l2(const VectorDataset& ds) {
  std::vector<EmbeddedSample> out = ds.samples();
  for (auto& s : out) {
    double sq = 0.0;
    for (double v : s.vector) sq += v * v;
    if (sq > 0.0) {
      const double inv = 1.0 / std::sqrt(sq);
      for (double& v : s.vector) v *= inv;
    }
  }
  return VectorDataset(ds.dimension(), ds.role(), std::move(out));
}

/// Row-major copy of all vectors, n x dimension.
inline std::vector<double> flatten(const VectorDataset& ds) {
  std::vector<double> flat;
  flat.reserve(ds.size() * ds.dimension());
  for (const auto& s : ds) flat.insert(flat.end(), s.vector.begin(), s.vector.end());
  return flat;
}

}  // namespace semibal

#endif  // SEMIBAL_DATASET_HPP
