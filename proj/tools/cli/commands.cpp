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

#include "cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "semibal/bench.hpp"
#include "semibal/dataset.hpp"
#include "semibal/dataset_io.hpp"
#include "semibal/errors.hpp"
#include "semibal/fixture.hpp"
#include "semibal/grid.hpp"
#include "semibal/logreg.hpp"
#include "semibal/metrics.hpp"
#include "semibal/rebalance.hpp"

namespace semibal::cli {
namespace fs = std::filesystem;
namespace {

struct DataLayout {
  Format format = Format::kCsv;
  std::size_t dimension = 1024;
  CsvOptions csv;
  std::optional<fs::path> li, u, test;
};

std::string extension(Format f) { return f == Format::kCsv ? ".csv" : ".f32"; }

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  detail::write_file(path, j.dump(2) + "\n");
}

fs::path prepare_out(const RunConfig& cfg, const std::string& command) {
  const fs::path dir = cfg.out_dir(command);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw DataError("cannot create output directory " + dir.string());
  write_json(dir / "config.json", cfg.to_json());
  return dir;
}

// Explicit paths win over the manifest; the manifest fixes format and
// dimension for the files it lists.
DataLayout resolve_layout(const RunConfig& cfg) {
  DataLayout l{cfg.format, cfg.dimension, {cfg.csv_header, false}, cfg.li, cfg.u, cfg.test};
  if (cfg.manifest) {
    const auto m = read_json(*cfg.manifest);
    const fs::path base = cfg.manifest->parent_path();
    try {
      l.format = format_from_string(m.at("format").get<std::string>());
      l.dimension = m.at("dimension").get<std::size_t>();
      l.csv.header = m.value("csv_header", false);
      const auto& files = m.at("files");
      if (!l.li) l.li = base / files.at("li").get<std::string>();
      if (!l.u) l.u = base / files.at("u").get<std::string>();
      if (!l.test) l.test = base / files.at("test").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw DataError("bad manifest: " + std::string(e.what()));
    }
  }
  return l;
}

VectorDataset load(const DataLayout& l, const std::optional<fs::path>& path, Role role,
                   const char* what, bool normalize) {
  if (!path) throw UsageError(std::string("missing path for ") + what + " (use --" + what + ")");
  auto ds = load_dataset(*path, l.format, role, l.dimension, l.csv);
  return normalize ? normalize_l2(ds) : ds;
}

// Files written without ids number their rows from 0, so LI and U collide.
// In that case U ids are shifted above every LI id.
VectorDataset disjoint_ids(const VectorDataset& li, const VectorDataset& u, std::ostream& err) {
  std::unordered_set<SampleId> ids;
  for (const auto& s : li) ids.insert(s.id);
  bool clash = false;
  for (const auto& s : u) clash = clash || ids.contains(s.id);
  if (!clash) return u;
  err << "note: U ids overlap LI ids; renumbering U from " << li.max_id() + 1 << "\n";
  std::vector<EmbeddedSample> samples = u.samples();
  SampleId next = li.max_id() + 1;
  for (auto& s : samples) s.id = next++;
  return VectorDataset(u.dimension(), u.role(), std::move(samples));
}

std::optional<SyntheticBatch> load_external(const RunConfig& cfg, const DataLayout& l) {
  if (!cfg.external) return std::nullopt;
  auto ds = load_dataset(*cfg.external, l.format, Role::kU, l.dimension, l.csv);
  return external_batch(cfg.normalize ? normalize_l2(ds) : ds);
}

const CsvOptions kWriteCsv{true, true};

}  // namespace

void cmd_fixture(const RunConfig& cfg, Io io) {
  const fs::path dir = prepare_out(cfg, "fixture");
  const Fixture fx = make_fixture(cfg.fixture);
  const std::string ext = extension(cfg.format);
  save_dataset(fx.li, dir / ("LI" + ext), cfg.format, kWriteCsv);
  save_dataset(fx.u, dir / ("U" + ext), cfg.format, kWriteCsv);
  save_dataset(fx.test, dir / ("Test" + ext), cfg.format, kWriteCsv);

  std::vector<int> origins;
  std::vector<SampleId> u_ids;
  for (std::size_t i = 0; i < fx.u.size(); ++i) {
    origins.push_back(label_value(fx.u_origins[i]));
    u_ids.push_back(fx.u[i].id);
  }
  const auto& s = cfg.fixture;
  write_json(dir / "manifest.json",
             {{"format", std::string(to_string(cfg.format))},
              {"dimension", s.dimension},
              {"csv_header", true},
              {"files", {{"li", "LI" + ext}, {"u", "U" + ext}, {"test", "Test" + ext}}},
              {"spec",
               {{"dimension", s.dimension},
                {"n_max", s.n_max},
                {"n_min", s.n_min},
                {"unlabeled", s.unlabeled},
                {"test_majority", s.test_majority},
                {"test_minority", s.test_minority},
                {"separation", s.separation},
                {"spread", s.spread},
                {"seed", s.seed}}},
              {"u_ids", u_ids},
              {"u_origins", origins}});
  io.out << "fixture: LI=" << fx.li.size() << " U=" << fx.u.size() << " Test=" << fx.test.size()
         << " d=" << s.dimension << " -> " << dir.string() << "\n";
}

void cmd_rebalance(const RunConfig& cfg, Io io) {
  const DataLayout l = resolve_layout(cfg);
  VectorDataset li = load(l, l.li, Role::kLI, "li", cfg.normalize);
  const Method method = cfg.methods.empty() ? Method::kKdDirect : cfg.methods.front();
  if (!cfg.n_grid.empty()) li = subsample_minority(li, cfg.n_grid.front(), derive_seed(cfg.seed, {cfg.n_grid.front(), 0}));
  VectorDataset u;
  const bool needs_pool = selects_from_pool(method);
  if (needs_pool) u = disjoint_ids(li, load(l, l.u, Role::kU, "u", cfg.normalize), io.err);
  const auto external = load_external(cfg, l);

  const fs::path dir = prepare_out(cfg, "rebalance");
  const RebalanceResult r = rebalance(method, li, u, cfg.rebalance, cfg.seed,
                                      external ? &*external : nullptr);
  for (const auto& w : r.record.warnings) io.err << "warning: " << w << "\n";
  save_dataset(r.lb, dir / ("LB" + extension(l.format)), l.format, kWriteCsv);
  write_selection_csv(r.record, dir / "selection.csv");
  write_json(dir / "summary.json", {{"method", std::string(to_string(method))},
                                    {"n_min", r.plan.n_min},
                                    {"n_max", r.plan.n_max},
                                    {"n_aug", r.plan.n_aug},
                                    {"quotas", r.plan.quotas},
                                    {"queries", r.record.queries},
                                    {"nodes_visited", r.record.stats.nodes_visited},
                                    {"points_scanned", r.record.stats.points_scanned},
                                    {"warnings", r.record.warnings}});
  io.out << "method=" << to_string(method) << " n_min=" << r.plan.n_min << " n_max=" << r.plan.n_max
         << " selected=" << r.plan.n_aug << " lb=" << r.lb.size() << "\n";
}

void cmd_train(const RunConfig& cfg, Io io) {
  DataLayout l = resolve_layout(cfg);
  l.csv = kWriteCsv;  // LB files come from `rebalance`
  const fs::path dir = prepare_out(cfg, "train");
  const fs::path lb_path = cfg.lb ? *cfg.lb : dir / ("LB" + extension(l.format));
  auto lb = load_dataset(lb_path, l.format, Role::kLB, l.dimension, l.csv);
  if (cfg.normalize) lb = normalize_l2(lb);
  const LogRegModel model = train(lb, cfg.hyper, cfg.seed);
  const fs::path model_path = cfg.model ? *cfg.model : dir / "model.json";
  model.save(model_path);
  io.out << "trained on " << lb.size() << " samples: epochs=" << model.epochs_run()
         << " loss=" << model.final_loss() << " -> " << model_path.string() << "\n";
}

void cmd_evaluate(const RunConfig& cfg, Io io) {
  const DataLayout l = resolve_layout(cfg);
  const fs::path dir = prepare_out(cfg, "evaluate");
  const fs::path model_path = cfg.model ? *cfg.model : dir / "model.json";
  const LogRegModel model = LogRegModel::load(model_path);
  const VectorDataset test = load(l, l.test, Role::kTest, "test", cfg.normalize);
  std::vector<int> labels;
  for (const auto& s : test) labels.push_back(label_value(*s.label));
  const MetricsReport m = compute_metrics(model.predict(test), labels, 1);
  write_json(dir / "metrics.json", {{"precision", m.precision},
                                    {"recall", m.recall},
                                    {"f1", m.f1},
                                    {"tp", m.tp},
                                    {"fp", m.fp},
                                    {"fn", m.fn},
                                    {"tn", m.tn}});
  io.out << std::setprecision(4) << "precision=" << m.precision << " recall=" << m.recall
         << " f1=" << m.f1 << "\n";
}

void cmd_grid(const RunConfig& cfg, Io io) {
  const DataLayout l = resolve_layout(cfg);
  VectorDataset li, u, test;
  if (l.li || l.u || l.test) {
    li = load(l, l.li, Role::kLI, "li", cfg.normalize);
    u = disjoint_ids(li, load(l, l.u, Role::kU, "u", cfg.normalize), io.err);
    test = load(l, l.test, Role::kTest, "test", cfg.normalize);
  } else {
    io.err << "no dataset paths given; generating fixture (seed " << cfg.fixture.seed << ")\n";
    const Fixture fx = make_fixture(cfg.fixture);
    li = cfg.normalize ? normalize_l2(fx.li) : fx.li;
    u = cfg.normalize ? normalize_l2(fx.u) : fx.u;
    test = cfg.normalize ? normalize_l2(fx.test) : fx.test;
  }
  GridConfig g;
  g.dataset_id = cfg.dataset_id;
  if (!cfg.methods.empty()) g.methods = cfg.methods;
  if (!cfg.n_grid.empty()) g.n_grid = cfg.n_grid;
  g.repetitions = cfg.repetitions;
  g.seed = cfg.seed;
  g.hyper = cfg.hyper;
  g.rebalance = cfg.rebalance;
  g.workers = cfg.workers;
  g.external = load_external(cfg, l);

  const fs::path dir = prepare_out(cfg, "grid");
  const std::size_t total = g.methods.size() * g.n_grid.size();
  std::size_t done = 0;
  const GridResult result = run_grid(li, u, test, g, [&](const GridRow& row) {
    ++done;
    io.err << "[" << done << "/" << total << "] " << to_string(row.method) << " n=" << row.n;
    if (row.failed) {
      io.err << " FAILED: " << row.reason << "\n";
    } else {
      io.err << std::setprecision(4) << " f1=" << row.report.f1.mean << " (std "
             << row.report.f1.std << ")\n";
    }
  });
  detail::write_file(dir / "grid.csv", grid_csv(result, cfg.timing));
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& row : result.rows) {
    if (row.failed) {
      failures.push_back({{"method", std::string(to_string(row.method))}, {"n", row.n}, {"reason", row.reason}});
    }
    for (const auto& [rep, why] : row.report.failures) {
      failures.push_back({{"method", std::string(to_string(row.method))},
                          {"n", row.n},
                          {"repetition", rep},
                          {"reason", why}});
    }
  }
  write_json(dir / "summary.json",
             {{"rows", result.rows.size()},
              {"bootstrap",
               "full-pipeline repetition: each repetition redraws the minority subsample, the "
               "rebalance and training with seed base+r; std is the population std"},
              {"failures", failures}});
  io.out << "grid: " << result.rows.size() << " rows -> " << (dir / "grid.csv").string() << "\n";
}

void cmd_bench(const RunConfig& cfg, Io io) {
  BenchConfig b = cfg.bench;
  b.rebalance = cfg.rebalance;
  if (!cfg.n_grid.empty()) b.n_values = cfg.n_grid;
  if (cfg.external) {
    const DataLayout l{cfg.format, b.dimension, {cfg.csv_header, false}, {}, {}, {}};
    b.external = load_external(cfg, l);
  }
  const fs::path dir = prepare_out(cfg, "bench");
  const auto rows = run_bench(b);
  detail::write_file(dir / "bench.csv", bench_csv(rows));
  for (const auto& r : rows) {
    io.out << r.workload << " pool=" << r.pool_size << " n_min=" << r.n_min
           << " queries=" << r.queries << " points_scanned=" << r.stats.points_scanned
           << " seconds=" << r.seconds_mean << "\n";
  }
}

}  // namespace semibal::cli
