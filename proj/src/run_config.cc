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

#include "score/run_config.h"

#include <set>

#include "score/dataset_io.h"
#include "score/error.h"

namespace score {

using nlohmann::json;

const std::map<std::string, InferencePreset, std::less<>> &inference_presets() {
  static const std::map<std::string, InferencePreset, std::less<>> presets = {
      {"nyt10m", {50, 0.6}},  {"nyt10d", {100, 0.7}}, {"disrex", {50, 0.5}},
      {"wiki20m", {100, 0.5}}, {"wiki20d", {150, 0.7}},
  };
  return presets;
}

namespace {

// Typed, path-aware access to one JSON object.
class Section {
 public:
  Section(const json &j, std::string path, std::set<std::string> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    for (const auto &[key, _] : j_.items()) {
      if (!allowed.contains(key)) throw ConfigError(field(key) + ": unknown field");
    }
  }

  bool has(const char *key) const { return j_.contains(key); }

  template <typename T>
  void read(const char *key, T &out) const {
    if (!j_.contains(key)) return;
    const json &v = j_.at(key);
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(field(key) + ": expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
      if (std::is_unsigned_v<T> && v.get<long long>() < 0) {
        throw ConfigError(field(key) + ": expected a non-negative integer");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
    }
    out = v.get<T>();
  }

  template <typename Parse>
  void read_enum(const char *key, Parse parse) const {
    std::string s;
    read(key, s);
    if (!j_.contains(key)) return;
    try {
      parse(s);
    } catch (const ConfigError &e) {
      throw ConfigError(field(key) + ": " + e.what());
    }
  }

  const json &at(const char *key) const { return j_.at(key); }
  std::string field(const std::string &key) const { return path_ + "." + key; }

 private:
  const json &j_;
  std::string path_;
};

}  // namespace

RunConfig parse_run_config(const json &j, const std::string &origin) {
  RunConfig cfg;
  const Section root(j, origin, {"seed", "preset", "arch", "train", "inference", "metrics"});
  root.read("seed", cfg.seed);
  cfg.train.seed = cfg.seed;

  if (root.has("preset")) {
    std::string name;
    root.read("preset", name);
    const auto it = inference_presets().find(name);
    if (it == inference_presets().end()) {
      throw ConfigError(root.field("preset") + ": unknown preset '" + name + "'");
    }
    cfg.inference.k = it->second.k;
    cfg.inference.c = it->second.c;
  }

  if (root.has("arch")) {
    const Section s(root.at("arch"), root.field("arch"),
                    {"num_layers", "width", "output_dim", "activation"});
    s.read("num_layers", cfg.arch.num_layers);
    s.read("width", cfg.arch.width);
    s.read("output_dim", cfg.arch.output_dim);
    s.read_enum("activation", [&](const std::string &v) {
      cfg.arch.activation = parse_activation(v);
    });
  }
  if (root.has("train")) {
    const Section s(root.at("train"), root.field("train"),
                    {"distance", "tau", "learning_rate", "batch_size", "max_epochs",
                     "patience", "weight_decay", "beta1", "beta2", "epsilon"});
    s.read_enum("distance", [&](const std::string &v) {
      cfg.train.distance_mode = parse_distance_mode(v);
    });
    s.read("tau", cfg.train.tau);
    s.read("learning_rate", cfg.train.learning_rate);
    s.read("batch_size", cfg.train.batch_size);
    s.read("max_epochs", cfg.train.max_epochs);
    s.read("patience", cfg.train.patience);
    s.read("weight_decay", cfg.train.weight_decay);
    s.read("beta1", cfg.train.beta1);
    s.read("beta2", cfg.train.beta2);
    s.read("epsilon", cfg.train.epsilon);
  }
  if (root.has("inference")) {
    const Section s(root.at("inference"), root.field("inference"),
                    {"k", "c", "prior", "threshold_mode"});
    s.read("k", cfg.inference.k);
    s.read("c", cfg.inference.c);
    s.read_enum("prior", [&](const std::string &v) {
      cfg.inference.prior = parse_prior_mode(v);
    });
    s.read_enum("threshold_mode", [&](const std::string &v) {
      cfg.inference.threshold_mode = parse_threshold_mode(v);
    });
  }
  if (root.has("metrics")) {
    const Section s(root.at("metrics"), root.field("metrics"), {"m_values", "include_phi"});
    if (s.has("m_values")) {
      const json &v = s.at("m_values");
      if (!v.is_array()) throw ConfigError(s.field("m_values") + ": expected an array");
      for (const auto &m : v) {
        if (!m.is_number_unsigned()) {
          throw ConfigError(s.field("m_values") + ": expected non-negative integers");
        }
        cfg.metrics.m_values.push_back(m.get<std::size_t>());
      }
    }
    s.read("include_phi", cfg.metrics.include_phi);
  }
  return cfg;
}

RunConfig read_run_config(const std::string &path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception &e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_run_config(j, "config");
}

json run_config_to_json(const RunConfig &c) {
  return {
      {"seed", c.seed},
      {"arch",
       {{"num_layers", c.arch.num_layers},
        {"width", c.arch.width},
        {"output_dim", c.arch.output_dim},
        {"activation", std::string(to_string(c.arch.activation))}}},
      {"train",
       {{"distance", std::string(to_string(c.train.distance_mode))},
        {"tau", c.train.tau},
        {"learning_rate", c.train.learning_rate},
        {"batch_size", c.train.batch_size},
        {"max_epochs", c.train.max_epochs},
        {"patience", c.train.patience},
        {"weight_decay", c.train.weight_decay},
        {"beta1", c.train.beta1},
        {"beta2", c.train.beta2},
        {"epsilon", c.train.epsilon}}},
      {"inference",
       {{"k", c.inference.k},
        {"c", c.inference.c},
        {"prior", std::string(to_string(c.inference.prior))},
        {"threshold_mode", std::string(to_string(c.inference.threshold_mode))}}},
  };
}

SynthSpec parse_synth_spec(const json &j, const std::string &origin) {
  SynthSpec spec;
  const Section s(j, origin,
                  {"num_classes", "samples_per_cluster", "input_dim", "cluster_count",
                   "label_sets_per_cluster", "noise_scale", "multilabel_fraction",
                   "seed"});
  s.read("num_classes", spec.num_classes);
  s.read("samples_per_cluster", spec.samples_per_cluster);
  s.read("input_dim", spec.input_dim);
  s.read("noise_scale", spec.noise_scale);
  s.read("multilabel_fraction", spec.multilabel_fraction);
  s.read("seed", spec.seed);
  if (!s.has("label_sets_per_cluster")) {
    throw ConfigError(s.field("label_sets_per_cluster") + ": required");
  }
  try {
    spec.label_sets_per_cluster =
        s.at("label_sets_per_cluster").get<std::vector<std::vector<int>>>();
  } catch (const json::exception &) {
    throw ConfigError(s.field("label_sets_per_cluster") +
                      ": expected an array of integer arrays");
  }
  spec.cluster_count = static_cast<int>(spec.label_sets_per_cluster.size());
  s.read("cluster_count", spec.cluster_count);
  return spec;
}

}  // namespace score
