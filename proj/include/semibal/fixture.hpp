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

#ifndef SEMIBAL_FIXTURE_HPP
#define SEMIBAL_FIXTURE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "semibal/dataset.hpp"
#include "semibal/errors.hpp"
#include "semibal/random.hpp"

namespace semibal {

/// Shape of a synthetic two-class embedding corpus: one isotropic Gaussian
/// per class, the minority mean offset by `separation` along axis 0.
struct FixtureSpec {
  std::size_t dimension = 1024;
  std::size_t n_max = 900;
  std::size_t n_min = 150;
  std::size_t unlabeled = 2000;
  std::size_t test_majority = 100;
  std::size_t test_minority = 100;
  double separation = 4.0;
  double spread = 1.0;
  std::uint64_t seed = 42;

  void validate() const {
    if (dimension == 0) throw UsageError("fixture dimension must be positive");
    if (!(spread > 0.0)) throw UsageError("fixture spread must be positive");
    if (!(separation >= 0.0)) throw UsageError("fixture separation must be non-negative");
  }
};

struct Fixture {
  VectorDataset li;
  VectorDataset u;
  VectorDataset test;
  /// Generating class of each U sample, parallel to u.samples().
  std::vector<Label> u_origins;
};

/// Draws a fixture. Coordinates are rounded to single precision so that
/// every file format round-trips them exactly.
///
/// Draw order: LI majority, LI minority, U origins shuffle, U vectors,
/// Test majority, Test minority. Ids run consecutively across LI, U, Test.
/// U holds floor(unlabeled/2) minority draws, the rest majority.
inline Fixture make_fixture(const FixtureSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  SampleId next_id = 0;

  auto draw = [&](Label cls) {
    std::vector<double> v(spec.dimension);
    for (std::size_t j = 0; j < spec.dimension; ++j) {
      const double mean = (cls == Label::kMinority && j == 0) ? spec.separation : 0.0;
      v[j] = static_cast<float>(rng.normal(mean, spec.spread));
    }
    return v;
  };
  auto labeled = [&](Label cls, std::size_t count, std::vector<EmbeddedSample>& out) {
    for (std::size_t i = 0; i < count; ++i) out.push_back({next_id++, draw(cls), cls});
  };

  std::vector<EmbeddedSample> li;
  labeled(Label::kMajority, spec.n_max, li);
  labeled(Label::kMinority, spec.n_min, li);

  const std::size_t u_min = spec.unlabeled / 2;
  std::vector<Label> origins(spec.unlabeled - u_min, Label::kMajority);
  origins.resize(spec.unlabeled, Label::kMinority);
  rng.shuffle(origins.begin(), origins.end());
  std::vector<EmbeddedSample> u;
  u.reserve(spec.unlabeled);
  for (Label cls : origins) u.push_back({next_id++, draw(cls), std::nullopt});

  std::vector<EmbeddedSample> test;
  labeled(Label::kMajority, spec.test_majority, test);
  labeled(Label::kMinority, spec.test_minority, test);

  return Fixture{VectorDataset(spec.dimension, Role::kLI, std::move(li)),
                 VectorDataset(spec.dimension, Role::kU, std::move(u)),
                 VectorDataset(spec.dimension, Role::kTest, std::move(test)),
                 std::move(origins)};
}

}  // namespace semibal

#endif  // SEMIBAL_FIXTURE_HPP
