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

#ifndef SCORE_GRID_SEARCH_H_
#define SCORE_GRID_SEARCH_H_

#include <span>
#include <string>
#include <vector>

#include "score/bayes_knn.h"
#include "score/data_model.h"
#include "score/projection.h"
#include "score/trainer.h"

namespace score {

struct GridCell {
  ArchConfig arch;
  TrainConfig train;
  InferenceConfig inference;
};

struct GridResult {
  std::size_t cell_index = 0;
  GridCell cell;
  bool ok = false;
  std::string error;
  double val_micro_f1 = 0.0;
  int best_epoch = 0;
};

// Trains one model per distinct (arch, train) pair, scores every cell by
// validation micro-F1 and returns successful cells best first (ties: lower k,
// then c, then learning rate, then cell order), followed by failed cells.
std::vector<GridResult> grid_search(std::span<const PairSample> train_set,
                                    std::span<const PairSample> val_set,
                                    std::span<const GridCell> grid, int num_classes,
                                    Exec exec = Exec::kParallel);

}  // namespace score

#endif  // SCORE_GRID_SEARCH_H_
