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

#ifndef SCORE_RUN_CONFIG_H_
#define SCORE_RUN_CONFIG_H_

// Run configuration file (JSON). Every section and key is optional; unknown
// keys are rejected with the full dotted path of the offending field.
//
//   {
//     "seed": 0,
//     "preset": "nyt10d",
//     "arch":      {"num_layers", "width", "output_dim", "activation"},
//     "train":     {"distance", "tau", "learning_rate", "batch_size",
//                   "max_epochs", "patience", "weight_decay", "beta1",
//                   "beta2", "epsilon"},
//     "inference": {"k", "c", "prior", "threshold_mode"},
//     "metrics":   {"m_values", "include_phi"}
//   }
//
// A preset only sets inference defaults (k, c); explicit inference keys and
// command-line flags take precedence over it.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"
#include "score/bayes_knn.h"
#include "score/data_model.h"
#include "score/metrics.h"
#include "score/projection.h"
#include "score/trainer.h"

namespace score {

struct RunConfig {
  ArchConfig arch;
  TrainConfig train;
  InferenceConfig inference;
  EvalOptions metrics;
  std::uint64_t seed = 0;
};

struct InferencePreset {
  int k;
  double c;
};

// Per-dataset inference settings selected on validation data.
const std::map<std::string, InferencePreset, std::less<>> &inference_presets();

RunConfig parse_run_config(const nlohmann::json &j, const std::string &origin);
RunConfig read_run_config(const std::string &path);
nlohmann::json run_config_to_json(const RunConfig &config);

SynthSpec parse_synth_spec(const nlohmann::json &j, const std::string &origin);

}  // namespace score

#endif  // SCORE_RUN_CONFIG_H_
