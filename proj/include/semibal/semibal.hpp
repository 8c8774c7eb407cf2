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

#ifndef SEMIBAL_SEMIBAL_HPP
#define SEMIBAL_SEMIBAL_HPP

#include "semibal/bench.hpp"
#include "semibal/dataset.hpp"
#include "semibal/dataset_io.hpp"
#include "semibal/errors.hpp"
#include "semibal/fixture.hpp"
#include "semibal/grid.hpp"
#include "semibal/kdtree.hpp"
#include "semibal/logreg.hpp"
#include "semibal/metrics.hpp"
#include "semibal/oversample.hpp"
#include "semibal/random.hpp"
#include "semibal/rebalance.hpp"

#endif  // SEMIBAL_SEMIBAL_HPP
