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

#include "score/grid_search.h"

#include <algorithm>
#include <optional>

#include "score/error.h"
#include "score/metrics.h"

namespace score {

std::vector<GridResult> grid_search(std::span<const PairSample> train_set,
                                    std::span<const PairSample> val_set,
                                    std::span<const GridCell> grid, int num_classes,
                                    Exec exec) {
  if (grid.empty()) throw ConfigError("grid search needs at least one cell");
  if (val_set.empty()) throw ValidationError("grid search needs a non-empty validation set");
  const LabelMatrix truth = LabelMatrix::from_samples(val_set, num_classes);

  struct Trained {
    ArchConfig arch;
    TrainConfig train;
    std::optional<TrainResult> result;
    std::optional<Datastore> store;
    std::string error;
  };
  std::vector<Trained> cache;

  std::vector<GridResult> results;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    GridResult r;
    r.cell_index = i;
    r.cell = grid[i];
    auto it = std::ranges::find_if(cache, [&](const Trained &t) {
      return t.arch == grid[i].arch && t.train == grid[i].train;
    });
    if (it == cache.end()) {
      Trained t{grid[i].arch, grid[i].train, std::nullopt, std::nullopt, {}};
      try {
        t.result = train(train_set, val_set, grid[i].arch, grid[i].train, num_classes, exec);
        t.store = build_datastore(t.result->model, train_set, num_classes, exec);
      } catch (const Error &e) {
        t.error = e.what();
      }
      cache.push_back(std::move(t));
      it = std::prev(cache.end());
    }
    if (!it->store) {
      r.error = it->error;
      results.push_back(std::move(r));
      continue;
    }
    try {
      const auto preds =
          predict_batch(it->result->model, *it->store, val_set, grid[i].inference, exec);
      if (!preds.failures.empty()) {
        throw ValidationError(std::to_string(preds.failures.size()) +
                              " validation samples failed, first '" +
                              preds.failures[0].id + "': " + preds.failures[0].message);
      }
      r.val_micro_f1 = micro_f1(prediction_matrix(preds.predictions), truth);
      r.best_epoch = it->result->history.best_epoch;
      r.ok = true;
    } catch (const Error &e) {
      r.error = e.what();
    }
    results.push_back(std::move(r));
  }

  std::ranges::stable_sort(results, [](const GridResult &a, const GridResult &b) {
    if (a.ok != b.ok) return a.ok;
    if (!a.ok) return a.cell_index < b.cell_index;
    if (a.val_micro_f1 != b.val_micro_f1) return a.val_micro_f1 > b.val_micro_f1;
    if (a.cell.inference.k != b.cell.inference.k) {
      return a.cell.inference.k < b.cell.inference.k;
    }
    if (a.cell.inference.c != b.cell.inference.c) {
      return a.cell.inference.c < b.cell.inference.c;
    }
    if (a.cell.train.learning_rate != b.cell.train.learning_rate) {
      return a.cell.train.learning_rate < b.cell.train.learning_rate;
    }
    return a.cell_index < b.cell_index;
  });
  return results;
}

}  // namespace score
