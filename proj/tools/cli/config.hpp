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

#ifndef SEMIBAL_CLI_CONFIG_HPP
#define SEMIBAL_CLI_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "semibal/bench.hpp"
#include "semibal/dataset_io.hpp"
#include "semibal/fixture.hpp"
#include "semibal/logreg.hpp"
#include "semibal/rebalance.hpp"

namespace semibal::cli {

/// Environment variable naming the default output root.
inline constexpr const char* kOutRootEnv = "SEMIBAL_OUT_ROOT";

/// Everything a command needs. Built from an optional JSON config file,
/// then command-line flags on top.
struct RunConfig {
  std::optional<std::filesystem::path> manifest;
  std::optional<std::filesystem::path> li;
  std::optional<std::filesystem::path> u;
  std::optional<std::filesystem::path> test;
  std::optional<std::filesystem::path> lb;
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> external;
  std::size_t dimension = 1024;
  Format format = Format::kCsv;
  bool csv_header = false;
  bool normalize = false;

  FixtureSpec fixture;
  std::vector<Method> methods;
  std::vector<std::size_t> n_grid;
  std::size_t repetitions = 100;
  std::uint64_t seed = 42;
  LogRegHyper hyper;
  RebalanceOptions rebalance;
  std::size_t workers = 1;
  bool timing = true;
  std::string dataset_id = "dataset";
  BenchConfig bench;

  std::optional<std::filesystem::path> out;

  /// Parses a config object; unknown keys are rejected with UsageError.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::filesystem::path& path);

  /// Resolved configuration, echoed into the run directory.
  nlohmann::json to_json() const;

  /// --out, else $SEMIBAL_OUT_ROOT/<command>, else ./semibal-out/<command>.
  std::filesystem::path out_dir(const std::string& command) const;
};

/// Parses a comma separated method list.
std::vector<Method> parse_methods(const std::string& list);
std::vector<std::size_t> parse_sizes(const std::string& list);

}  // namespace semibal::cli

#endif  // SEMIBAL_CLI_CONFIG_HPP
