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

#include "score/trainer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "score/contrastive_loss.h"
#include "score/error.h"
#include "score/rng.h"

namespace score {

void TrainConfig::validate() const {
  if (!(tau > 0.0)) throw ConfigError("train.tau must be > 0");
  if (batch_size < 2) throw ConfigError("train.batch_size must be >= 2");
  if (patience < 1) throw ConfigError("train.patience must be >= 1");
  if (max_epochs < 1) throw ConfigError("train.max_epochs must be >= 1");
  if (!(learning_rate >= 0.0)) throw ConfigError("train.learning_rate must be >= 0");
  if (!(weight_decay >= 0.0)) throw ConfigError("train.weight_decay must be >= 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("train.beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("train.beta2 must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("train.epsilon must be > 0");
}

namespace {

Gradients zeros_like(const ProjectionModel &model) {
  Gradients g;
  for (const auto &l : model.layers) {
    g.push_back({Matrix(l.weight.rows(), l.weight.cols()),
                 std::vector<double>(l.bias.size(), 0.0)});
  }
  return g;
}

void adam_update(std::span<double> p, std::span<const double> g, std::span<double> m,
                 std::span<double> v, const TrainConfig &c, double bc1, double bc2) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] -= c.learning_rate * c.weight_decay * p[i];
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    p[i] -= c.learning_rate * mhat / (std::sqrt(vhat) + c.epsilon);
  }
}

LabelMatrix gather_labels(std::span<const PairSample> samples,
                          std::span<const std::size_t> order, int num_classes) {
  LabelMatrix y(order.size(), static_cast<std::size_t>(num_classes));
  for (std::size_t r = 0; r < order.size(); ++r) {
    for (int h : samples[order[r]].labels) y(r, static_cast<std::size_t>(h)) = 1;
  }
  return y;
}

// Splits [0, n) into consecutive chunks of at most batch_size.
std::vector<std::pair<std::size_t, std::size_t>> chunk(std::size_t n,
                                                       std::size_t batch_size,
                                                       bool fold_singleton) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t start = 0; start < n; start += batch_size) {
    out.emplace_back(start, std::min(batch_size, n - start));
  }
  if (!out.empty() && out.back().second < 2) {
    if (fold_singleton && out.size() > 1) {
      const auto last = out.back();
      out.pop_back();
      out.back().second += last.second;
    } else {
      out.pop_back();
    }
  }
  return out;
}

void check_samples(std::span<const PairSample> samples, int input_dim, int num_classes,
                   const char *what) {
  for (const auto &s : samples) {
    if (s.x.size() != static_cast<std::size_t>(input_dim)) {
      throw ShapeError(std::string(what) + " sample '" + s.id + "' has " +
                       std::to_string(s.x.size()) + " features, expected " +
                       std::to_string(input_dim));
    }
    for (int h : s.labels) {
      if (h < 0 || h >= num_classes) {
        throw ValidationError(std::string(what) + " sample '" + s.id + "': label " +
                              std::to_string(h) + " out of range");
      }
    }
  }
}

}  // namespace

AdamW::AdamW(const ProjectionModel &model, const TrainConfig &config)
    : config_(config), m_(zeros_like(model)), v_(zeros_like(model)) {}

void AdamW::step(ProjectionModel &model, const Gradients &grads) {
  ++step_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    adam_update(model.layers[l].weight.data(), grads[l].weight.data(),
                m_[l].weight.data(), v_[l].weight.data(), config_, bc1, bc2);
    adam_update(model.layers[l].bias, grads[l].bias, m_[l].bias, v_[l].bias, config_,
                bc1, bc2);
  }
}

Matrix gather_inputs(std::span<const PairSample> samples,
                     std::span<const std::size_t> order) {
  const std::size_t dim = order.empty() ? 0 : samples[order[0]].x.size();
  Matrix x(order.size(), dim);
  for (std::size_t r = 0; r < order.size(); ++r) {
    std::ranges::copy(samples[order[r]].x, x.row(r).begin());
  }
  return x;
}

double evaluate_loss(const ProjectionModel &model, std::span<const PairSample> samples,
                     int num_classes, int batch_size, Exec exec) {
  if (samples.size() < 2) throw ConfigError("loss evaluation needs at least 2 samples");
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  double weighted = 0.0;
  for (const auto &[start, count] :
       chunk(samples.size(), static_cast<std::size_t>(batch_size), true)) {
    const std::span<const std::size_t> idx(order.data() + start, count);
    const Matrix z = project_batch(model, gather_inputs(samples, idx), exec);
    weighted += static_cast<double>(count) *
                supcon_multilabel_loss(z, gather_labels(samples, idx, num_classes),
                                       model.distance_mode, model.tau, exec);
  }
  return weighted / static_cast<double>(samples.size());
}

TrainResult train(std::span<const PairSample> train_set,
                  std::optional<std::span<const PairSample>> val_set,
                  const ArchConfig &arch, const TrainConfig &config, int num_classes,
                  Exec exec) {
  config.validate();
  arch.validate();
  if (train_set.empty()) throw ValidationError("empty training set");
  if (static_cast<std::size_t>(config.batch_size) > train_set.size()) {
    throw ConfigError("train.batch_size (" + std::to_string(config.batch_size) +
                      ") exceeds the training set size (" +
                      std::to_string(train_set.size()) + ")");
  }
  check_samples(train_set, arch.input_dim, num_classes, "train");
  if (val_set) check_samples(*val_set, arch.input_dim, num_classes, "validation");

  ProjectionModel model = init_model(arch, config.seed, config.distance_mode, config.tau);
  AdamW optimizer(model, config);
  // Shuffling uses its own stream so it does not depend on the parameter count.
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  const auto monitored = [&](const ProjectionModel &m) {
    return evaluate_loss(m, val_set ? *val_set : train_set, num_classes,
                         config.batch_size, exec);
  };

  TrainResult result;
  auto &hist = result.history;
  try {
    hist.initial_loss = monitored(model);
  } catch (const DegenerateVectorError &e) {
    throw TrainingError(std::string("initial loss: ") + e.what());
  }
  ProjectionModel best = model;
  hist.best_loss = std::numeric_limits<double>::infinity();
  hist.stop_reason = "max_epochs";

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  const auto batches =
      chunk(train_set.size(), static_cast<std::size_t>(config.batch_size), false);

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      const auto [start, count] = batches[b];
      const std::span<const std::size_t> idx(order.data() + start, count);
      LossGradients lg;
      try {
        lg = loss_gradients(model, gather_inputs(train_set, idx),
                            gather_labels(train_set, idx, num_classes),
                            config.distance_mode, config.tau, exec);
      } catch (const DegenerateVectorError &e) {
        throw TrainingError("epoch " + std::to_string(epoch) + ", batch " +
                            std::to_string(b) + ": " + e.what());
      }
      if (!std::isfinite(lg.loss)) {
        throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) +
                            ", batch " + std::to_string(b));
      }
      loss_sum += lg.loss;
      optimizer.step(model, lg.grads);
    }
    hist.train_loss.push_back(loss_sum / static_cast<double>(batches.size()));

    double watched;
    try {
      watched = monitored(model);
    } catch (const DegenerateVectorError &e) {
      throw TrainingError("epoch " + std::to_string(epoch) + ": " + e.what());
    }
    if (!std::isfinite(watched)) {
      throw TrainingError("non-finite monitored loss at epoch " + std::to_string(epoch));
    }
    if (val_set) hist.val_loss.push_back(watched);
    hist.monitored_loss.push_back(watched);

    if (watched < hist.best_loss) {
      hist.best_loss = watched;
      hist.best_epoch = epoch;
      best = model;
    } else if (epoch - hist.best_epoch >= config.patience) {
      hist.stop_reason = "early_stopping";
      break;
    }
  }
  result.model = std::move(best);
  return result;
}

}  // namespace score
