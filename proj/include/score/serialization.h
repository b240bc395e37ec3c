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

#ifndef SCORE_SERIALIZATION_H_
#define SCORE_SERIALIZATION_H_

// JSON forms of the artifacts the pipeline writes:
//   model file    {"format_version":1, "arch":{...}, "distance_mode":...,
//                  "tau":..., "layers":[{"w":[[...]], "b":[...]}]}
//   predictions   JSONL {"id":..., "posteriors":[...], "pred":[0/1...],
//                  "confidence":...}
//   history and evaluation reports.
// Doubles are written in shortest round-trip form, so reading a file back
// reproduces every value exactly.

#include <filesystem>
#include <string>
#include <vector>

#include "score/bayes_knn.h"
#include "score/metrics.h"
#include "score/projection.h"
#include "score/trainer.h"

namespace score {

std::string model_to_json(const ProjectionModel &model);
ProjectionModel model_from_json(const std::string &text, const std::string &origin);
void write_model(const std::filesystem::path &path, const ProjectionModel &model);
ProjectionModel read_model(const std::filesystem::path &path);

std::string predictions_to_jsonl(const std::vector<PredictionSet> &predictions);
void write_predictions(const std::filesystem::path &path,
                       const std::vector<PredictionSet> &predictions);
std::vector<PredictionSet> read_predictions(const std::filesystem::path &path);

std::string history_to_json(const TrainHistory &history);
std::string report_to_json(const EvalReport &report);

}  // namespace score

#endif  // SCORE_SERIALIZATION_H_
