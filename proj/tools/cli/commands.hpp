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

#ifndef SEMIBAL_CLI_COMMANDS_HPP
#define SEMIBAL_CLI_COMMANDS_HPP

#include <ostream>

#include "cli/config.hpp"

namespace semibal::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitInfeasible = 3,
};

struct Io {
  std::ostream& out;
  std::ostream& err;
};

/// Writes LI, U and Test plus manifest.json (spec and U ground-truth origins).
void cmd_fixture(const RunConfig& cfg, Io io);
/// Writes LB, selection.csv and summary.json for one method.
void cmd_rebalance(const RunConfig& cfg, Io io);
/// Trains on LB, writes model.json.
void cmd_train(const RunConfig& cfg, Io io);
/// Scores a model on Test, writes metrics.json.
void cmd_evaluate(const RunConfig& cfg, Io io);
/// Runs the methods x n grid, writes grid.csv.
void cmd_grid(const RunConfig& cfg, Io io);
/// Times kd-direct against synthetic-seeded selection, writes bench.csv.
void cmd_bench(const RunConfig& cfg, Io io);

/// Full command line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace semibal::cli

#endif  // SEMIBAL_CLI_COMMANDS_HPP
