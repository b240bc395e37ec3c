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

#ifndef SCORE_TRAINER_H_
#define SCORE_TRAINER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "score/data_model.h"
#include "score/kernels.h"
#include "score/projection.h"

namespace score {

struct TrainConfig {
  DistanceMode distance_mode = DistanceMode::kEuclidean;
  double tau = 0.01;
  double learning_rate = 5e-3;
  int batch_size = 256;
  int max_epochs = 30;
  int patience = 5;
  std::uint64_t seed = 0;
  // AdamW
  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
  bool operator==(const TrainConfig &) const = default;
};

struct TrainHistory {
  double initial_loss = 0.0;         // monitored loss before the first update
  std::vector<double> train_loss;    // mean minibatch loss per epoch
  std::vector<double> val_loss;      // empty without a validation set
  std::vector<double> monitored_loss;
  int best_epoch = 0;                // 1-based
  double best_loss = 0.0;
  std::string stop_reason;           // "early_stopping" | "max_epochs"
};

struct TrainResult {
  ProjectionModel model;
  TrainHistory history;
};

// AdamW with decoupled weight decay applied to every parameter.
class AdamW {
 public:
  AdamW(const ProjectionModel &model, const TrainConfig &config);
  void step(ProjectionModel &model, const Gradients &grads);

 private:
  TrainConfig config_;
  Gradients m_;
  Gradients v_;
  long step_ = 0;
};

// Mean contrastive loss over samples, evaluated in fixed-order chunks of
// batch_size (a trailing singleton chunk is folded into the previous one).
double evaluate_loss(const ProjectionModel &model, std::span<const PairSample> samples,
                     int num_classes, int batch_size, Exec exec = Exec::kParallel);

// Minibatch training with per-epoch shuffling and early stopping on the
// validation loss (train loss without a validation set). The returned model
// holds the weights of the best monitored epoch.
TrainResult train(std::span<const PairSample> train_set,
                  std::optional<std::span<const PairSample>> val_set,
                  const ArchConfig &arch, const TrainConfig &config, int num_classes,
                  Exec exec = Exec::kParallel);

// Packs the x vectors of the samples selected by order into a batch matrix.
Matrix gather_inputs(std::span<const PairSample> samples,
                     std::span<const std::size_t> order);

}  // namespace score

#endif  // SCORE_TRAINER_H_
