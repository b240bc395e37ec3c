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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "score/data_model.h"
#include "score/error.h"
#include "score/grid_search.h"
#include "score/serialization.h"
#include "score/trainer.h"
#include "test_util.h"

using namespace score;

namespace {

SynthDataset two_clusters(double noise = 0.0) {
  SynthSpec s;
  s.num_classes = 2;
  s.samples_per_cluster = 20;
  s.input_dim = 6;
  s.cluster_count = 2;
  s.label_sets_per_cluster = {{0}, {1}};
  s.noise_scale = noise;
  s.seed = 3;
  return generate_synthetic(s);
}

ArchConfig tiny_arch(int input) {
  ArchConfig a;
  a.num_layers = 2;
  a.width = 8;
  a.output_dim = 3;
  a.input_dim = input;
  return a;
}

TrainConfig quick_config() {
  TrainConfig c;
  c.tau = 0.1;
  c.learning_rate = 1e-2;
  c.batch_size = 8;
  c.max_epochs = 8;
  c.patience = 3;
  c.seed = 1;
  return c;
}

}  // namespace

TEST_CASE("training lowers the loss on a separable toy set") {
  const auto data = two_clusters(0.05);
  const auto result = train(data.train, std::nullopt, tiny_arch(6), quick_config(), 2);
  const auto &h = result.history;
  CHECK(h.monitored_loss.size() >= 1);
  CHECK(h.val_loss.empty());
  CHECK(h.best_epoch >= 1);
  CHECK(h.best_loss < h.initial_loss);
  CHECK(h.monitored_loss[static_cast<std::size_t>(h.best_epoch - 1)] == h.best_loss);
  CHECK(evaluate_loss(result.model, data.train, 2, 8) == doctest::Approx(h.best_loss).epsilon(1e-12));
}

TEST_CASE("a frozen learning rate stops at best epoch plus patience") {
  const auto data = two_clusters();
  auto config = quick_config();
  config.learning_rate = 0.0;
  config.max_epochs = 20;
  config.patience = 4;
  const std::span<const PairSample> val(data.train);
  const auto result = train(data.train, val, tiny_arch(6), config, 2);
  CHECK(result.history.stop_reason == "early_stopping");
  CHECK(result.history.best_epoch == 1);
  CHECK(result.history.monitored_loss.size() == 5);
  CHECK(result.history.val_loss == result.history.monitored_loss);
  CHECK(result.model == init_model(tiny_arch(6), config.seed, config.distance_mode, config.tau));
}

TEST_CASE("runs without early stopping report max_epochs") {
  const auto data = two_clusters(0.05);
  auto config = quick_config();
  config.max_epochs = 2;
  config.patience = 10;
  const auto result = train(data.train, std::nullopt, tiny_arch(6), config, 2);
  CHECK(result.history.stop_reason == "max_epochs");
  CHECK(result.history.train_loss.size() == 2);
}

TEST_CASE("training is deterministic for a fixed seed") {
  const auto data = two_clusters(0.1);
  const auto a = train(data.train, std::nullopt, tiny_arch(6), quick_config(), 2);
  const auto b = train(data.train, std::nullopt, tiny_arch(6), quick_config(), 2, Exec::kSerial);
  CHECK(a.model == b.model);
  CHECK(history_to_json(a.history) == history_to_json(b.history));
}

TEST_CASE("training input errors") {
  const auto data = two_clusters();
  auto config = quick_config();
  CHECK_THROWS_AS(train({}, std::nullopt, tiny_arch(6), config, 2), ValidationError);
  config.batch_size = 1000;
  CHECK_THROWS_AS(train(data.train, std::nullopt, tiny_arch(6), config, 2), ConfigError);
  config = quick_config();
  config.tau = 0.0;
  CHECK_THROWS_AS(train(data.train, std::nullopt, tiny_arch(6), config, 2), ConfigError);
  CHECK_THROWS_AS(train(data.train, std::nullopt, tiny_arch(5), quick_config(), 2), ShapeError);
}

TEST_CASE("non-finite inputs abort training with the failing batch") {
  const auto data = two_clusters();
  auto poisoned = data.train;
  poisoned[0].x[0] = std::numeric_limits<double>::infinity();
  auto config = quick_config();
  config.batch_size = static_cast<int>(poisoned.size());
  const std::span<const PairSample> val(data.train);
  try {
    train(poisoned, val, tiny_arch(6), config, 2);
    FAIL("expected TrainingError");
  } catch (const TrainingError &e) {
    CHECK(std::string(e.what()).find("epoch 1, batch 0") != std::string::npos);
  }
}

TEST_CASE("AdamW first step matches the closed form") {
  ProjectionModel model;
  model.arch = {1, 2, 2, Activation::kSwish, 1};
  model.layers = {DenseLayer{Matrix(2, 1, 0.5), {0.0, 1.0}}, DenseLayer{Matrix(2, 2, -1.0), {2.0, 0.0}}};
  Gradients grads = model.layers;
  for (auto &l : grads) {
    for (double &v : l.weight.data()) v = 0.3;
    for (double &v : l.bias) v = -0.2;
  }
  TrainConfig config;
  config.learning_rate = 0.1;
  config.weight_decay = 0.5;
  AdamW opt(model, config);
  const ProjectionModel before = model;
  opt.step(model, grads);
  // After one step m_hat = g and v_hat = g^2, so the update is lr * g / (|g| + eps).
  const auto expected = [&](double p, double g) {
    return p - 0.1 * 0.5 * p - 0.1 * g / (std::abs(g) + 1e-8);
  };
  CHECK(model.layers[0].weight(1, 0) == doctest::Approx(expected(0.5, 0.3)).epsilon(1e-12));
  CHECK(model.layers[0].bias[1] == doctest::Approx(expected(1.0, -0.2)).epsilon(1e-12));
  CHECK(model.layers[1].weight(0, 1) == doctest::Approx(expected(-1.0, 0.3)).epsilon(1e-12));
  CHECK_FALSE(model == before);
}

TEST_CASE("grid of one cell returns that cell") {
  const auto data = two_clusters(0.05);
  GridCell cell{tiny_arch(6), quick_config(), {}};
  cell.inference.k = 5;
  const auto results = grid_search(data.train, data.test, std::vector<GridCell>{cell}, 2);
  REQUIRE(results.size() == 1);
  CHECK(results[0].ok);
  CHECK(results[0].cell_index == 0);
  CHECK(results[0].val_micro_f1 >= 0.0);
  CHECK(results[0].val_micro_f1 <= 1.0);
}

TEST_CASE("broken cells are marked failed and ranked last") {
  const auto data = two_clusters(0.05);
  GridCell good{tiny_arch(6), quick_config(), {}};
  good.inference.k = 5;
  GridCell broken = good;
  broken.train.tau = 0.0;
  const auto results = grid_search(data.train, data.test, std::vector<GridCell>{broken, good}, 2);
  REQUIRE(results.size() == 2);
  CHECK(results[0].ok);
  CHECK(results[0].cell_index == 1);
  CHECK_FALSE(results[1].ok);
  CHECK(results[1].error.find("tau") != std::string::npos);
}

TEST_CASE("an absurd learning rate does not outrank a sane one") {
  const auto data = two_clusters(0.0);
  GridCell sane{tiny_arch(6), quick_config(), {}};
  sane.inference.k = 5;
  GridCell absurd = sane;
  absurd.train.learning_rate = 10.0;
  const auto results = grid_search(data.train, data.test, std::vector<GridCell>{absurd, sane}, 2);
  REQUIRE(results.size() == 2);
  CHECK(results[0].cell_index == 1);
  if (results[1].ok) CHECK(results[0].val_micro_f1 >= results[1].val_micro_f1);
}
