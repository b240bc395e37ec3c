// Copyright 2026 The score-re Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "score/cli.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "CLI11.hpp"
#include "json.hpp"
#include "score/bayes_knn.h"
#include "score/data_model.h"
#include "score/dataset_io.h"
#include "score/error.h"
#include "score/grid_search.h"
#include "score/metrics.h"
#include "score/run_config.h"
#include "score/serialization.h"
#include "score/trainer.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace score {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Options shared by several subcommands. Optional fields override the config
// file when set.
struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string data;
  std::string model;
  std::string out;
  std::optional<int> k;
  std::optional<double> threshold;
  std::optional<std::string> prior;
  std::optional<std::string> threshold_mode;
  std::optional<std::string> m_values;
  std::optional<std::string> preset;
  bool include_phi = false;
  int threads = 0;
  // Subcommand-specific.
  std::string spec;
  std::string test;
  std::string history;
  std::string pred;
  std::string truth;
  std::string manifest;
  std::string grid;
  std::string tokens;
};

// Wall-clock and CPU time of one command, written next to its output.
class RunTimer {
 public:
  RunTimer() : wall_(std::chrono::steady_clock::now()), cpu_(std::clock()) {}

  void write_log(const fs::path &artifact, const std::string &command,
                 const json &extra = json::object()) const {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_).count();
    const double cpu = static_cast<double>(std::clock() - cpu_) / CLOCKS_PER_SEC;
    json j = extra;
    j["command"] = command;
    j["wall_seconds"] = wall;
    j["cpu_seconds"] = cpu;
    j["finished_at_unix"] = std::chrono::duration_cast<std::chrono::seconds>(
                                std::chrono::system_clock::now().time_since_epoch())
                                .count();
    write_file(fs::path(artifact.string() + ".log"), j.dump() + "\n");
  }

 private:
  std::chrono::steady_clock::time_point wall_;
  std::clock_t cpu_;
};

std::vector<std::size_t> parse_m_values(const std::string &text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception &) {
      pos = 0;
    }
    if (pos != item.size() || v < 0) {
      throw ConfigError("--m-values: '" + item + "' is not a non-negative integer");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

RunConfig load_config(const Options &o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : read_run_config(o.config);
  if (o.preset) {
    json j = o.config.empty() ? json::object() : json::parse(read_file(o.config));
    j["preset"] = *o.preset;
    // Re-parse so explicit inference keys from the file still win.
    cfg = parse_run_config(j, "config");
  }
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.train.seed = *o.seed;
  }
  if (o.k) cfg.inference.k = *o.k;
  if (o.threshold) cfg.inference.c = *o.threshold;
  if (o.prior) cfg.inference.prior = parse_prior_mode(*o.prior);
  if (o.threshold_mode) cfg.inference.threshold_mode = parse_threshold_mode(*o.threshold_mode);
  if (o.m_values) cfg.metrics.m_values = parse_m_values(*o.m_values);
  if (o.include_phi) cfg.metrics.include_phi = true;
  return cfg;
}

void require_valid(std::span<const PairSample> records, const DatasetMeta &meta,
                   const fs::path &path) {
  const auto report = validate_dataset(records, meta);
  if (report.ok) return;
  std::string msg = path.string() + ": " + std::to_string(report.violations.size()) +
                    " violation(s)";
  for (std::size_t i = 0; i < std::min<std::size_t>(5, report.violations.size()); ++i) {
    const auto &v = report.violations[i];
    msg += "\n  record " + std::to_string(v.record_index) + " ('" + v.id + "'): " + v.message;
  }
  throw ValidationError(msg);
}

struct LoadedSplit {
  DatasetMeta meta;
  std::vector<PairSample> records;
};

LoadedSplit load_split(const fs::path &dir, const std::string &split) {
  LoadedSplit s;
  s.meta = read_manifest(dir / "manifest.json");
  const fs::path path = dir / (split + ".jsonl");
  s.records = read_pairs(path);
  require_valid(s.records, s.meta, path);
  return s;
}

std::optional<std::vector<PairSample>> load_optional_split(const fs::path &dir,
                                                           const std::string &split,
                                                           const DatasetMeta &meta) {
  const fs::path path = dir / (split + ".jsonl");
  if (!fs::exists(path)) return std::nullopt;
  auto records = read_pairs(path);
  require_valid(records, meta, path);
  return records;
}

void require(const std::string &value, const char *flag) {
  if (value.empty()) throw ConfigError(std::string("missing required option ") + flag);
}

int cmd_synth(const Options &o, std::ostream &out) {
  require(o.spec, "--spec");
  require(o.out, "--out");
  json j;
  try {
    j = json::parse(read_file(o.spec));
  } catch (const json::exception &e) {
    throw ConfigError(o.spec + ": " + e.what());
  }
  SynthSpec spec = parse_synth_spec(j, "spec");
  if (o.seed) spec.seed = *o.seed;
  const auto data = generate_synthetic(spec);
  const fs::path dir(o.out);
  write_manifest(dir / "manifest.json", data.meta);
  write_pairs(dir / "train.jsonl", data.train);
  write_pairs(dir / "test.jsonl", data.test);
  out << "wrote " << data.train.size() << " train and " << data.test.size()
      << " test samples to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_train(const Options &o, std::ostream &out) {
  require(o.data, "--data");
  require(o.out, "--out");
  RunTimer timer;
  RunConfig cfg = load_config(o);
  const fs::path dir(o.data);
  const auto train_split = load_split(dir, "train");
  const auto val = load_optional_split(dir, "val", train_split.meta);
  cfg.arch.input_dim = train_split.meta.embedding_dim;

  const auto result =
      val ? train(train_split.records, std::span<const PairSample>(*val), cfg.arch,
                  cfg.train, train_split.meta.num_classes)
          : train(train_split.records, std::nullopt, cfg.arch, cfg.train,
                  train_split.meta.num_classes);
  const fs::path model_path(o.out);
  write_model(model_path, result.model);
  const fs::path history_path =
      o.history.empty() ? fs::path(o.out + ".history.json") : fs::path(o.history);
  write_file(history_path, history_to_json(result.history));
  timer.write_log(model_path, "train",
                  {{"epochs_run", result.history.train_loss.size()},
                   {"best_epoch", result.history.best_epoch}});
  out << "trained " << result.history.train_loss.size() << " epochs (best "
      << result.history.best_epoch << ", " << result.history.stop_reason << "); wrote "
      << model_path.string() << "\n";
  return kExitOk;
}

int cmd_predict(const Options &o, std::ostream &out, std::ostream &err) {
  require(o.model, "--model");
  require(o.data, "--data");
  require(o.out, "--out");
  RunTimer timer;
  const RunConfig cfg = load_config(o);
  const ProjectionModel model = read_model(o.model);
  const fs::path dir(o.data);
  const auto train_split = load_split(dir, "train");
  if (train_split.meta.embedding_dim != model.arch.input_dim) {
    throw ValidationError("dimension conflict: dataset embedding_dim is " +
                          std::to_string(train_split.meta.embedding_dim) +
                          " but the model expects " + std::to_string(model.arch.input_dim));
  }
  const fs::path test_path = o.test.empty() ? dir / "test.jsonl" : fs::path(o.test);
  const auto test = read_pairs(test_path);
  // Test records may be unlabeled at prediction time; only shapes are enforced.
  for (const auto &s : test) {
    if (s.x.size() != static_cast<std::size_t>(model.arch.input_dim)) {
      throw ValidationError(test_path.string() + ": record '" + s.id + "' has " +
                            std::to_string(s.x.size()) + " features, model expects " +
                            std::to_string(model.arch.input_dim));
    }
  }
  const Datastore store =
      build_datastore(model, train_split.records, train_split.meta.num_classes);
  const auto batch = predict_batch(model, store, test, cfg.inference);
  write_predictions(o.out, batch.predictions);
  timer.write_log(o.out, "predict",
                  {{"predicted", batch.predictions.size()},
                   {"failed", batch.failures.size()}});
  for (const auto &f : batch.failures) err << "failed '" << f.id << "': " << f.message << "\n";
  out << "wrote " << batch.predictions.size() << " predictions to " << o.out << "\n";
  return batch.failures.empty() ? kExitOk : kExitInvalid;
}

int cmd_eval(const Options &o, std::ostream &out) {
  require(o.pred, "--pred");
  require(o.truth, "--truth");
  const RunConfig cfg = load_config(o);
  const fs::path truth_path(o.truth);
  const fs::path manifest_path =
      !o.manifest.empty() ? fs::path(o.manifest)
      : !o.data.empty()   ? fs::path(o.data) / "manifest.json"
                          : truth_path.parent_path() / "manifest.json";
  const DatasetMeta meta = read_manifest(manifest_path);
  const auto truth_records = read_pairs(truth_path);
  require_valid(truth_records, meta, truth_path);
  const auto preds = read_predictions(o.pred);

  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].posteriors.size() != static_cast<std::size_t>(meta.num_classes)) {
      throw ValidationError("dimension conflict: prediction '" + preds[i].id + "' has R=" +
                            std::to_string(preds[i].posteriors.size()) +
                            " classes but the truth manifest declares R=" +
                            std::to_string(meta.num_classes));
    }
    if (!by_id.emplace(preds[i].id, i).second) {
      throw ValidationError(o.pred + ": duplicate prediction id '" + preds[i].id + "'");
    }
  }
  if (preds.size() != truth_records.size()) {
    throw ValidationError(std::to_string(preds.size()) + " predictions for " +
                          std::to_string(truth_records.size()) + " truth records");
  }
  std::vector<PredictionSet> aligned;
  aligned.reserve(truth_records.size());
  for (const auto &t : truth_records) {
    const auto it = by_id.find(t.id);
    if (it == by_id.end()) throw ValidationError("no prediction for truth id '" + t.id + "'");
    aligned.push_back(preds[it->second]);
  }
  const LabelMatrix truth = LabelMatrix::from_samples(truth_records, meta.num_classes);
  EvalReport report = evaluate(aligned, truth, cfg.metrics);
  std::string m_list;
  for (std::size_t m : cfg.metrics.m_values) {
    m_list += (m_list.empty() ? "" : ",") + std::to_string(m);
  }
  report.config = {{"m_values", m_list},
                   {"include_phi", cfg.metrics.include_phi ? "true" : "false"},
                   {"relation_names", json(meta.relation_names).dump()}};
  const std::string text = report_to_json(report);
  if (o.out.empty()) {
    out << text;
  } else {
    write_file(o.out, text);
    out << "micro_f1=" << report.micro_f1 << " wrote " << o.out << "\n";
  }
  return kExitOk;
}

std::vector<GridCell> expand_grid(const json &grid, int input_dim) {
  const json base = grid.value("base", json::object());
  std::vector<json> variants;
  if (grid.contains("cells")) {
    for (const auto &cell : grid.at("cells")) {
      json merged = base;
      merged.merge_patch(cell);
      variants.push_back(std::move(merged));
    }
  } else if (grid.contains("product")) {
    variants.push_back(base);
    for (const auto &[dotted, values] : grid.at("product").items()) {
      const auto dot = dotted.find('.');
      if (dot == std::string::npos || !values.is_array() || values.empty()) {
        throw ConfigError("grid.product." + dotted +
                          ": expected 'section.key' mapped to a non-empty array");
      }
      const std::string section = dotted.substr(0, dot);
      const std::string key = dotted.substr(dot + 1);
      std::vector<json> next;
      for (const auto &v : variants) {
        for (const auto &value : values) {
          json copy = v;
          copy[section][key] = value;
          next.push_back(std::move(copy));
        }
      }
      variants = std::move(next);
    }
  } else {
    variants.push_back(base);
  }
  std::vector<GridCell> cells;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const RunConfig cfg = parse_run_config(variants[i], "grid.cell[" + std::to_string(i) + "]");
    GridCell cell{cfg.arch, cfg.train, cfg.inference};
    cell.arch.input_dim = input_dim;
    cells.push_back(cell);
  }
  return cells;
}

int cmd_gridsearch(const Options &o, std::ostream &out) {
  require(o.data, "--data");
  require(o.grid, "--grid");
  require(o.out, "--out");
  RunTimer timer;
  const fs::path dir(o.data);
  const auto train_split = load_split(dir, "train");
  // Without a validation split, cells are scored on the training split.
  const auto val = load_optional_split(dir, "val", train_split.meta);
  json grid;
  try {
    grid = json::parse(read_file(o.grid));
  } catch (const json::exception &e) {
    throw ConfigError(o.grid + ": " + e.what());
  }
  if (o.seed) {
    grid["base"]["seed"] = *o.seed;
  }
  const auto cells = expand_grid(grid, train_split.meta.embedding_dim);
  const auto results = grid_search(train_split.records,
                                   val ? std::span<const PairSample>(*val)
                                       : std::span<const PairSample>(train_split.records),
                                   cells, train_split.meta.num_classes);
  json arr = json::array();
  for (std::size_t rank = 0; rank < results.size(); ++rank) {
    const auto &r = results[rank];
    RunConfig echo;
    echo.arch = r.cell.arch;
    echo.train = r.cell.train;
    echo.inference = r.cell.inference;
    echo.seed = r.cell.train.seed;
    arr.push_back({{"rank", rank + 1},
                   {"cell_index", r.cell_index},
                   {"ok", r.ok},
                   {"error", r.ok ? json(nullptr) : json(r.error)},
                   {"val_micro_f1", r.ok ? json(r.val_micro_f1) : json(nullptr)},
                   {"best_epoch", r.best_epoch},
                   {"config", run_config_to_json(echo)}});
  }
  write_file(o.out, json{{"validation_split", val ? "val" : "train"}, {"results", arr}}.dump(2) +
                        "\n");
  timer.write_log(o.out, "gridsearch", {{"cells", cells.size()}});
  out << "ranked " << results.size() << " cells; wrote " << o.out << "\n";
  return kExitOk;
}

int cmd_validate(const Options &o, std::ostream &out) {
  require(o.data, "--data");
  const fs::path dir(o.data);
  const DatasetMeta meta = read_manifest(dir / "manifest.json");
  bool ok = true;
  for (const char *split : {"train", "val", "test"}) {
    const fs::path path = dir / (std::string(split) + ".jsonl");
    if (!fs::exists(path)) continue;
    const auto records = read_pairs(path);
    const auto report = validate_dataset(records, meta);
    out << split << ": " << report.num_records << " records, "
        << report.violations.size() << " violations, multilabel fraction "
        << report.multilabel_fraction << "\n";
    for (const auto &v : report.violations) {
      out << "  record " << v.record_index << " ('" << v.id << "'): " << v.message << "\n";
    }
    ok = ok && report.ok;
  }
  return ok ? kExitOk : kExitInvalid;
}

int cmd_pairs(const Options &o, std::ostream &out) {
  require(o.tokens, "--tokens");
  require(o.out, "--out");
  std::vector<PairSample> pairs;
  for (const auto &record : read_token_records(o.tokens)) {
    auto built = build_pair_vectors(record);
    pairs.insert(pairs.end(), built.begin(), built.end());
  }
  write_pairs(o.out, pairs);
  out << "wrote " << pairs.size() << " pair samples to " << o.out << "\n";
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string> &args, std::ostream &out,
                std::ostream &err) {
  CLI::App app{"Multi-label relation extraction over frozen encoder embeddings"};
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", o.config, "Run configuration JSON");
    sub->add_option("--seed", o.seed, "Seed for all randomness");
    sub->add_option("--threads", o.threads, "OpenMP threads (0 = runtime default)");
  };
  const auto add_inference = [&](CLI::App *sub) {
    sub->add_option("--k", o.k, "Number of nearest neighbours");
    sub->add_option("--threshold", o.threshold, "Universal threshold c");
    sub->add_option("--prior", o.prior, "Prior: flat|informative");
    sub->add_option("--threshold-mode", o.threshold_mode, "Threshold: universal|class");
    sub->add_option("--preset", o.preset, "Inference preset (nyt10m, nyt10d, disrex, "
                                          "wiki20m, wiki20d)");
  };

  auto *synth = app.add_subcommand("synth", "Generate a synthetic clustered dataset");
  synth->add_option("--spec", o.spec, "Synthetic dataset spec JSON");
  synth->add_option("--out", o.out, "Output dataset directory");
  synth->add_option("--seed", o.seed, "Override the SynthSpec seed");

  auto *train_cmd = app.add_subcommand("train", "Train the projection head");
  add_common(train_cmd);
  train_cmd->add_option("--data", o.data, "Dataset directory");
  train_cmd->add_option("--out", o.out, "Model file to write");
  train_cmd->add_option("--history", o.history, "History JSON (default <out>.history.json)");

  auto *predict = app.add_subcommand("predict", "Run Bayesian kNN inference");
  add_common(predict);
  add_inference(predict);
  predict->add_option("--model", o.model, "Model file");
  predict->add_option("--data", o.data, "Dataset directory (train.jsonl is the datastore)");
  predict->add_option("--test", o.test, "Records to predict (default <data>/test.jsonl)");
  predict->add_option("--out", o.out, "Predictions JSONL to write");

  auto *eval = app.add_subcommand("eval", "Score predictions against ground truth");
  add_common(eval);
  eval->add_option("--pred", o.pred, "Predictions JSONL");
  eval->add_option("--truth", o.truth, "Ground-truth split JSONL");
  eval->add_option("--data", o.data, "Dataset directory holding manifest.json");
  eval->add_option("--manifest", o.manifest, "Manifest path (overrides --data)");
  eval->add_option("--out", o.out, "Report JSON (default stdout)");
  eval->add_option("--m-values", o.m_values, "Comma-separated M values for @M metrics");
  eval->add_flag("--include-phi", o.include_phi, "Include phi matrices in the report");

  auto *grid = app.add_subcommand("gridsearch", "Rank hyperparameter cells on validation data");
  add_common(grid);
  grid->add_option("--data", o.data, "Dataset directory");
  grid->add_option("--grid", o.grid, "Grid JSON");
  grid->add_option("--out", o.out, "Ranked results JSON");

  auto *validate = app.add_subcommand("validate", "Check a dataset directory");
  validate->add_option("--data", o.data, "Dataset directory");

  auto *pairs = app.add_subcommand("pairs", "Build pair vectors from a token file");
  pairs->add_option("--tokens", o.tokens, "tokens.jsonl");
  pairs->add_option("--out", o.out, "Pair JSONL to write");

  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInvalid;
  }

#ifdef _OPENMP
  if (o.threads > 0) omp_set_num_threads(o.threads);
#endif

  try {
    if (*synth) return cmd_synth(o, out);
    if (*train_cmd) return cmd_train(o, out);
    if (*predict) return cmd_predict(o, out, err);
    if (*eval) return cmd_eval(o, out);
    if (*grid) return cmd_gridsearch(o, out);
    if (*validate) return cmd_validate(o, out);
    if (*pairs) return cmd_pairs(o, out);
  } catch (const IoError &e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const nlohmann::json::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace score
