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

#include "score/serialization.h"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "score/dataset_io.h"
#include "score/error.h"

namespace score {

using nlohmann::json;

namespace {

json matrix_rows(const Matrix &m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

json optional_number(const std::optional<double> &v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string model_to_json(const ProjectionModel &model) {
  json j;
  j["format_version"] = kFormatVersion;
  j["arch"] = {{"num_layers", model.arch.num_layers},
               {"width", model.arch.width},
               {"output_dim", model.arch.output_dim},
               {"activation", std::string(to_string(model.arch.activation))},
               {"input_dim", model.arch.input_dim},
               {"depth_width_ratio", model.arch.depth_width_ratio()}};
  j["distance_mode"] = std::string(to_string(model.distance_mode));
  j["tau"] = model.tau;
  json layers = json::array();
  for (const auto &l : model.layers) {
    layers.push_back({{"w", matrix_rows(l.weight)}, {"b", l.bias}});
  }
  j["layers"] = std::move(layers);
  return j.dump() + "\n";
}

ProjectionModel model_from_json(const std::string &text, const std::string &origin) {
  ProjectionModel model;
  try {
    const json j = json::parse(text);
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw ValidationError(origin + ": unsupported model format_version");
    }
    const json &a = j.at("arch");
    model.arch.num_layers = a.at("num_layers").get<int>();
    model.arch.width = a.at("width").get<int>();
    model.arch.output_dim = a.at("output_dim").get<int>();
    model.arch.activation = parse_activation(a.at("activation").get<std::string>());
    model.arch.input_dim = a.at("input_dim").get<int>();
    model.arch.validate();
    model.distance_mode = parse_distance_mode(j.at("distance_mode").get<std::string>());
    model.tau = j.at("tau").get<double>();
    if (!(model.tau > 0.0)) throw ValidationError(origin + ": tau must be > 0");
    const auto &layers = j.at("layers");
    if (layers.size() != static_cast<std::size_t>(model.arch.num_layers + 1)) {
      throw ValidationError(origin + ": expected " +
                            std::to_string(model.arch.num_layers + 1) + " layers, found " +
                            std::to_string(layers.size()));
    }
    std::size_t fan_in = static_cast<std::size_t>(model.arch.input_dim);
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const std::size_t fan_out = l + 1 == layers.size()
                                      ? static_cast<std::size_t>(model.arch.output_dim)
                                      : static_cast<std::size_t>(model.arch.width);
      const auto rows = layers[l].at("w").get<std::vector<std::vector<double>>>();
      DenseLayer layer{Matrix(fan_out, fan_in), layers[l].at("b").get<std::vector<double>>()};
      if (rows.size() != fan_out || layer.bias.size() != fan_out) {
        throw ValidationError(origin + ": layer " + std::to_string(l) +
                              " has the wrong number of outputs");
      }
      for (std::size_t r = 0; r < fan_out; ++r) {
        if (rows[r].size() != fan_in) {
          throw ValidationError(origin + ": layer " + std::to_string(l) + " row " +
                                std::to_string(r) + " has the wrong fan-in");
        }
        std::ranges::copy(rows[r], layer.weight.row(r).begin());
      }
      model.layers.push_back(std::move(layer));
      fan_in = fan_out;
    }
  } catch (const json::exception &e) {
    throw ValidationError(origin + ": " + e.what());
  } catch (const ConfigError &e) {
    throw ValidationError(origin + ": " + e.what());
  }
  return model;
}

void write_model(const std::filesystem::path &path, const ProjectionModel &model) {
  write_file(path, model_to_json(model));
}

ProjectionModel read_model(const std::filesystem::path &path) {
  return model_from_json(read_file(path), path.string());
}

std::string predictions_to_jsonl(const std::vector<PredictionSet> &predictions) {
  std::string buf;
  for (const auto &p : predictions) {
    json j;
    j["id"] = p.id;
    j["posteriors"] = p.posteriors;
    std::vector<int> pred(p.pred.begin(), p.pred.end());
    j["pred"] = pred;
    j["confidence"] = p.confidence;
    buf += j.dump();
    buf += '\n';
  }
  return buf;
}

void write_predictions(const std::filesystem::path &path,
                       const std::vector<PredictionSet> &predictions) {
  write_file(path, predictions_to_jsonl(predictions));
}

std::vector<PredictionSet> read_predictions(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::vector<PredictionSet> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    try {
      const json j = json::parse(line);
      PredictionSet p;
      p.id = j.at("id").get<std::string>();
      p.posteriors = j.at("posteriors").get<std::vector<double>>();
      for (int v : j.at("pred").get<std::vector<int>>()) {
        if (v != 0 && v != 1) throw ValidationError(where + ": pred entries must be 0 or 1");
        p.pred.push_back(static_cast<std::uint8_t>(v));
      }
      if (p.pred.size() != p.posteriors.size()) {
        throw ValidationError(where + ": pred and posteriors differ in length");
      }
      p.confidence = j.value("confidence", 0.0);
      out.push_back(std::move(p));
    } catch (const json::exception &e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return out;
}

std::string history_to_json(const TrainHistory &h) {
  json j;
  j["initial_loss"] = h.initial_loss;
  j["train_loss"] = h.train_loss;
  j["val_loss"] = h.val_loss.empty() ? json(nullptr) : json(h.val_loss);
  j["monitored_loss"] = h.monitored_loss;
  j["best_epoch"] = h.best_epoch;
  j["best_loss"] = h.best_loss;
  j["epochs_run"] = h.train_loss.size();
  j["stop_reason"] = h.stop_reason;
  return j.dump(2) + "\n";
}

std::string report_to_json(const EvalReport &r) {
  json j;
  j["num_samples"] = r.num_samples;
  j["num_classes"] = r.num_classes;
  j["micro_f1"] = r.micro_f1;
  j["macro_f1"] = optional_number(r.macro_f1);
  j["p_at_r"] = optional_number(r.p_at_r);
  j["csd"] = r.csd;
  json per_class = json::array();
  for (const auto &v : r.per_class_f1) per_class.push_back(optional_number(v));
  j["per_class_f1"] = std::move(per_class);
  json at_m = json::array();
  for (const auto &e : r.at_m) {
    at_m.push_back({{"m", e.m}, {"micro_f1", e.micro}, {"macro_f1", optional_number(e.macro)}});
  }
  j["at_m"] = std::move(at_m);
  if (r.phi_pred) j["phi_pred"] = matrix_rows(*r.phi_pred);
  if (r.phi_truth) j["phi_truth"] = matrix_rows(*r.phi_truth);
  j["config"] = r.config;
  return j.dump(2) + "\n";
}

}  // namespace score
