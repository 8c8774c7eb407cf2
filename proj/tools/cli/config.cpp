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

#include "cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "semibal/errors.hpp"

namespace semibal::cli {
namespace {

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!j.is_object()) throw UsageError(where + " must be a JSON object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!keys.contains(key)) throw UsageError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const nlohmann::json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

void read_path(const nlohmann::json& j, const char* key,
               std::optional<std::filesystem::path>& into) {
  if (j.contains(key) && !j.at(key).is_null()) into = j.at(key).get<std::string>();
}

FixtureSpec fixture_from_json(const nlohmann::json& j, std::uint64_t default_seed) {
  reject_unknown(j,
                 {"dimension", "n_max", "n_min", "unlabeled", "test_majority", "test_minority",
                  "separation", "spread", "seed"},
                 "fixture");
  FixtureSpec f;
  f.seed = default_seed;
  read(j, "dimension", f.dimension);
  read(j, "n_max", f.n_max);
  read(j, "n_min", f.n_min);
  read(j, "unlabeled", f.unlabeled);
  read(j, "test_majority", f.test_majority);
  read(j, "test_minority", f.test_minority);
  read(j, "separation", f.separation);
  read(j, "spread", f.spread);
  read(j, "seed", f.seed);
  return f;
}

nlohmann::json fixture_to_json(const FixtureSpec& f) {
  return {{"dimension", f.dimension},         {"n_max", f.n_max},
          {"n_min", f.n_min},                 {"unlabeled", f.unlabeled},
          {"test_majority", f.test_majority}, {"test_minority", f.test_minority},
          {"separation", f.separation},       {"spread", f.spread},
          {"seed", f.seed}};
}

nlohmann::json opt_path(const std::optional<std::filesystem::path>& p) {
  return p ? nlohmann::json(p->string()) : nlohmann::json(nullptr);
}

}  // namespace

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(method_from_string(item));
  }
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& list) {
  std::vector<std::size_t> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(item, &pos);
      if (pos != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw UsageError("expected a non-negative integer, got '" + item + "'");
    }
  }
  return out;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  reject_unknown(j,
                 {"manifest", "li", "u", "test", "lb", "model", "external", "dimension", "format",
                  "csv_header", "normalize", "fixture", "methods", "n_grid", "repetitions", "seed",
                  "hyper", "k", "leaf_capacity", "workers", "timing", "dataset_id", "bench", "out"},
                 "config");
  RunConfig c;
  try {
    read_path(j, "manifest", c.manifest);
    read_path(j, "li", c.li);
    read_path(j, "u", c.u);
    read_path(j, "test", c.test);
    read_path(j, "lb", c.lb);
    read_path(j, "model", c.model);
    read_path(j, "external", c.external);
    read_path(j, "out", c.out);
    read(j, "dimension", c.dimension);
    if (j.contains("format")) c.format = format_from_string(j["format"].get<std::string>());
    read(j, "csv_header", c.csv_header);
    read(j, "normalize", c.normalize);
    read(j, "seed", c.seed);
    c.fixture.seed = c.seed;
    if (j.contains("fixture")) c.fixture = fixture_from_json(j["fixture"], c.seed);
    if (j.contains("methods")) {
      for (const auto& m : j["methods"]) c.methods.push_back(method_from_string(m.get<std::string>()));
    }
    read(j, "n_grid", c.n_grid);
    read(j, "repetitions", c.repetitions);
    if (j.contains("hyper")) {
      const auto& h = j["hyper"];
      reject_unknown(h, {"learning_rate", "l2", "max_epochs", "tolerance"}, "hyper");
      read(h, "learning_rate", c.hyper.learning_rate);
      read(h, "l2", c.hyper.l2);
      read(h, "max_epochs", c.hyper.max_epochs);
      read(h, "tolerance", c.hyper.tolerance);
    }
    read(j, "k", c.rebalance.k);
    read(j, "leaf_capacity", c.rebalance.leaf_capacity);
    read(j, "workers", c.workers);
    read(j, "timing", c.timing);
    read(j, "dataset_id", c.dataset_id);
    c.bench.seed = c.seed;
    if (j.contains("bench")) {
      const auto& b = j["bench"];
      reject_unknown(b,
                     {"dimension", "pool_sizes", "n_values", "n_max", "repetitions", "separation",
                      "spread", "seed"},
                     "bench");
      read(b, "dimension", c.bench.dimension);
      read(b, "pool_sizes", c.bench.pool_sizes);
      read(b, "n_values", c.bench.n_values);
      read(b, "n_max", c.bench.n_max);
      read(b, "repetitions", c.bench.repetitions);
      read(b, "separation", c.bench.separation);
      read(b, "spread", c.bench.spread);
      read(b, "seed", c.bench.seed);
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json methods_json = nlohmann::json::array();
  for (Method m : methods) methods_json.push_back(std::string(semibal::to_string(m)));
  return {
      {"manifest", opt_path(manifest)},
      {"li", opt_path(li)},
      {"u", opt_path(u)},
      {"test", opt_path(test)},
      {"lb", opt_path(lb)},
      {"model", opt_path(model)},
      {"external", opt_path(external)},
      {"dimension", dimension},
      {"format", std::string(semibal::to_string(format))},
      {"csv_header", csv_header},
      {"normalize", normalize},
      {"fixture", fixture_to_json(fixture)},
      {"methods", methods_json},
      {"n_grid", n_grid},
      {"repetitions", repetitions},
      {"seed", seed},
      {"hyper",
       {{"learning_rate", hyper.learning_rate},
        {"l2", hyper.l2},
        {"max_epochs", hyper.max_epochs},
        {"tolerance", hyper.tolerance}}},
      {"k", rebalance.k},
      {"leaf_capacity", rebalance.leaf_capacity},
      {"workers", workers},
      {"timing", timing},
      {"dataset_id", dataset_id},
      {"bench",
       {{"dimension", bench.dimension},
        {"pool_sizes", bench.pool_sizes},
        {"n_values", bench.n_values},
        {"n_max", bench.n_max},
        {"repetitions", bench.repetitions},
        {"separation", bench.separation},
        {"spread", bench.spread},
        {"seed", bench.seed}}},
      {"out", opt_path(out)},
  };
}

std::filesystem::path RunConfig::out_dir(const std::string& command) const {
  if (out) return *out;
  if (const char* root = std::getenv(kOutRootEnv); root && *root) {
    return std::filesystem::path(root) / command;
  }
  return std::filesystem::path("semibal-out") / command;
}

}  // namespace semibal::cli
