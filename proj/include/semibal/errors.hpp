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

#ifndef SEMIBAL_ERRORS_HPP
#define SEMIBAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace semibal {

// Malformed or inconsistent input data (bad rows, non-finite values,
// dimension mismatches, bad labels).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A request that is well-formed but cannot be satisfied, e.g. the unlabeled
// pool is too small to cover the minority deficit.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments or configuration.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace semibal

#endif  // SEMIBAL_ERRORS_HPP
