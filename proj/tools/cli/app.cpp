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

#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "semibal/errors.hpp"

namespace semibal::cli {
namespace {

struct Flags {
  std::string config, method, n, out, format, manifest, li, u, test, lb, model, external,
      dataset_id;
  std::uint64_t seed = 0;
  std::size_t repetitions = 0, workers = 0, dimension = 0, k = 0, leaf_capacity = 0;
  bool normalize = false, header = false, no_timing = false;
  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const {
    const auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
};

void add_flags(CLI::App& sub, Flags& f) {
  auto& o = f.opts;
  o["config"] = sub.add_option("--config", f.config, "JSON config file (flags override it)");
  o["seed"] = sub.add_option("--seed", f.seed, "Base random seed");
  o["method"] = sub.add_option("--method", f.method, "Method, or comma separated list for grid");
  o["n"] = sub.add_option("--n", f.n, "Minority size, or comma separated list");
  o["repetitions"] = sub.add_option("--repetitions", f.repetitions, "Bootstrap repetitions");
  o["out"] = sub.add_option("--out", f.out, "Output directory");
  o["workers"] = sub.add_option("--workers", f.workers, "Parallel grid rows");
  o["format"] = sub.add_option("--format", f.format, "Dataset format")
                    ->check(CLI::IsMember({"csv", "raw-f32"}));
  o["normalize"] = sub.add_flag("--normalize", f.normalize, "Scale vectors to unit L2 norm");
  o["manifest"] = sub.add_option("--manifest", f.manifest, "Fixture manifest listing LI/U/Test");
  o["li"] = sub.add_option("--li", f.li, "Labeled imbalanced dataset");
  o["u"] = sub.add_option("--u", f.u, "Unlabeled pool");
  o["test"] = sub.add_option("--test", f.test, "Test dataset");
  o["lb"] = sub.add_option("--lb", f.lb, "Balanced dataset for training");
  o["model"] = sub.add_option("--model", f.model, "Model JSON path");
  o["external"] = sub.add_option("--external", f.external, "External synthetic vectors");
  o["dimension"] = sub.add_option("--dimension", f.dimension, "Embedding dimension");
  o["header"] = sub.add_flag("--header", f.header, "CSV inputs start with a header row");
  o["no-timing"] = sub.add_flag("--no-timing", f.no_timing, "Write NA runtimes (reproducible grid CSV)");
  o["dataset-id"] = sub.add_option("--dataset-id", f.dataset_id, "Dataset label in grid output");
  o["k"] = sub.add_option("--k", f.k, "Oversampler neighbor count");
  o["leaf-capacity"] = sub.add_option("--leaf-capacity", f.leaf_capacity, "kd-tree leaf size");
}

RunConfig resolve(const Flags& f) {
  RunConfig cfg = f.given("config") ? RunConfig::load(f.config) : RunConfig{};
  if (f.given("seed")) {
    cfg.seed = f.seed;
    cfg.fixture.seed = f.seed;
    cfg.bench.seed = f.seed;
  }
  if (f.given("method")) cfg.methods = parse_methods(f.method);
  if (f.given("n")) cfg.n_grid = parse_sizes(f.n);
  if (f.given("repetitions")) {
    cfg.repetitions = f.repetitions;
    cfg.bench.repetitions = f.repetitions;
  }
  if (f.given("out")) cfg.out = f.out;
  if (f.given("workers")) cfg.workers = f.workers;
  if (f.given("format")) cfg.format = format_from_string(f.format);
  if (f.normalize) cfg.normalize = true;
  if (f.given("manifest")) cfg.manifest = f.manifest;
  if (f.given("li")) cfg.li = f.li;
  if (f.given("u")) cfg.u = f.u;
  if (f.given("test")) cfg.test = f.test;
  if (f.given("lb")) cfg.lb = f.lb;
  if (f.given("model")) cfg.model = f.model;
  if (f.given("external")) cfg.external = f.external;
  if (f.given("dimension")) {
    cfg.dimension = f.dimension;
    cfg.fixture.dimension = f.dimension;
    cfg.bench.dimension = f.dimension;
  }
  if (f.header) cfg.csv_header = true;
  if (f.no_timing) cfg.timing = false;
  if (f.given("dataset-id")) cfg.dataset_id = f.dataset_id;
  if (f.given("k")) cfg.rebalance.k = f.k;
  if (f.given("leaf-capacity")) cfg.rebalance.leaf_capacity = f.leaf_capacity;
  return cfg;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-supervised minority rebalancing over embedding vectors"};
  app.require_subcommand(1);
  using Command = std::function<void(RunConfig&, Io)>;
  const std::vector<std::tuple<const char*, const char*, Command>> commands = {
      {"fixture", "Write a synthetic LI/U/Test fixture",
       [](RunConfig& c, Io io) {
         // --n sets the fixture minority size.
         if (!c.n_grid.empty()) c.fixture.n_min = c.n_grid.front();
         cmd_fixture(c, io);
       }},
      {"rebalance", "Form the balanced set LB with one method",
       [](RunConfig& c, Io io) { cmd_rebalance(c, io); }},
      {"train", "Train logistic regression on LB", [](RunConfig& c, Io io) { cmd_train(c, io); }},
      {"evaluate", "Score a trained model on Test",
       [](RunConfig& c, Io io) { cmd_evaluate(c, io); }},
      {"grid", "Run the methods x minority-size experiment grid",
       [](RunConfig& c, Io io) { cmd_grid(c, io); }},
      {"bench", "Compare direct and synthetic-seeded selection cost",
       [](RunConfig& c, Io io) { cmd_bench(c, io); }},
  };
  std::vector<Flags> flags(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    subs.push_back(app.add_subcommand(std::get<0>(commands[i]), std::get<1>(commands[i])));
    add_flags(*subs.back(), flags[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      RunConfig cfg = resolve(flags[i]);
      std::get<2>(commands[i])(cfg, Io{out, err});
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace semibal::cli
