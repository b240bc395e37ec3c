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

#include "score/bayes_knn.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "score/error.h"
#include "score/metrics.h"

namespace score {

std::string_view to_string(PriorMode m) {
  return m == PriorMode::kFlat ? "flat" : "informative";
}

std::string_view to_string(ThresholdMode m) {
  return m == ThresholdMode::kUniversal ? "universal" : "class_specific";
}

PriorMode parse_prior_mode(std::string_view name) {
  if (name == "flat") return PriorMode::kFlat;
  if (name == "informative") return PriorMode::kInformative;
  throw ConfigError("unknown prior '" + std::string(name) +
                    "' (expected flat|informative)");
}

ThresholdMode parse_threshold_mode(std::string_view name) {
  if (name == "universal") return ThresholdMode::kUniversal;
  if (name == "class" || name == "class_specific") return ThresholdMode::kClassSpecific;
  throw ConfigError("unknown threshold mode '" + std::string(name) +
                    "' (expected universal|class)");
}

void InferenceConfig::validate() const {
  if (k < 1) throw ConfigError("inference.k must be >= 1");
  if (!(c >= 0.0 && c <= 1.0)) throw ConfigError("inference.c must lie in [0, 1]");
}

Datastore::Datastore(Matrix z, LabelMatrix y, DistanceMode mode, double tau)
    : z_(std::move(z)), y_(std::move(y)), counts_(y_.cols(), 0), mode_(mode), tau_(tau) {
  if (z_.rows() == 0) throw ValidationError("empty datastore");
  if (z_.rows() != y_.rows()) throw ShapeError("datastore: z and y row counts differ");
  if (!(tau_ > 0.0)) throw ConfigError("datastore tau must be > 0");
  for (std::size_t i = 0; i < y_.rows(); ++i) {
    for (std::size_t h = 0; h < y_.cols(); ++h) counts_[h] += y_(i, h);
  }
  total_count_ = std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
}

double Datastore::class_frequency(std::size_t h) const {
  if (total_count_ == 0) return 0.0;
  return static_cast<double>(counts_[h]) / static_cast<double>(total_count_);
}

Datastore build_datastore(const ProjectionModel &model,
                          std::span<const PairSample> train, int num_classes,
                          Exec exec) {
  if (train.empty()) throw ValidationError("empty datastore");
  const auto dim = static_cast<std::size_t>(model.arch.input_dim);
  Matrix x(train.size(), dim);
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i].x.size() != dim) {
      throw ShapeError("datastore sample '" + train[i].id + "' has " +
                       std::to_string(train[i].x.size()) + " features, model expects " +
                       std::to_string(dim));
    }
    std::ranges::copy(train[i].x, x.row(i).begin());
  }
  Matrix z;
  try {
    z = project_batch(model, x, exec);
  } catch (const DegenerateVectorError &) {
    // Re-project one by one to name the offending sample.
    for (const auto &s : train) {
      try {
        project(model, s.x);
      } catch (const DegenerateVectorError &e) {
        throw DegenerateVectorError("datastore sample '" + s.id + "': " + e.what());
      }
    }
    throw;
  }
  return Datastore(std::move(z), LabelMatrix::from_samples(train, num_classes),
                   model.distance_mode, model.tau);
}

std::vector<Neighbor> select_neighbors(std::span<const double> distances, int k) {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (static_cast<std::size_t>(k) > distances.size()) {
    throw ConfigError("k = " + std::to_string(k) + " exceeds datastore size " +
                      std::to_string(distances.size()));
  }
  std::vector<Neighbor> all(distances.size());
  for (std::size_t i = 0; i < distances.size(); ++i) all[i] = {i, distances[i]};
  const auto closer = [](const Neighbor &a, const Neighbor &b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  };
  std::partial_sort(all.begin(), all.begin() + k, all.end(), closer);
  all.resize(static_cast<std::size_t>(k));
  return all;
}

std::vector<Neighbor> knn_query(const Datastore &store, std::span<const double> z,
                                int k) {
  if (z.size() != store.z().cols()) {
    throw ShapeError("query has dimension " + std::to_string(z.size()) +
                     ", datastore has " + std::to_string(store.z().cols()));
  }
  std::vector<double> d(store.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = distance(z, store.z().row(i), store.distance_mode());
  }
  return select_neighbors(d, k);
}

double prior_probability(const Datastore &store, std::size_t h, PriorMode mode) {
  return mode == PriorMode::kFlat ? 0.5 : store.class_frequency(h);
}

std::vector<double> posterior(const Datastore &store, std::span<const Neighbor> neighbors,
                              const InferenceConfig &config) {
  if (neighbors.empty()) throw ConfigError("posterior needs at least one neighbour");
  double d_min = neighbors[0].distance;
  for (const auto &n : neighbors) d_min = std::min(d_min, n.distance);
  // exp(-(d - d_min) / tau): the common factor exp(-d_min / tau) cancels.
  std::vector<double> w(neighbors.size());
  for (std::size_t n = 0; n < neighbors.size(); ++n) {
    w[n] = kernel_weight(neighbors[n].distance - d_min, store.tau());
  }
  std::vector<double> out(store.num_classes(), 0.0);
  for (std::size_t h = 0; h < out.size(); ++h) {
    const double p = prior_probability(store, h, config.prior);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t n = 0; n < neighbors.size(); ++n) {
      const double y = store.y()(neighbors[n].index, h);
      num += p * y * w[n];
      den += (p * y + (1.0 - p) * (1.0 - y)) * w[n];
    }
    out[h] = den > 0.0 ? num / den : 0.0;
  }
  return out;
}

std::vector<std::uint8_t> sharp_predict(std::span<const double> posteriors,
                                        const Datastore &store,
                                        const InferenceConfig &config) {
  std::vector<std::uint8_t> pred(posteriors.size(), 0);
  for (std::size_t h = 0; h < posteriors.size(); ++h) {
    const double threshold = config.threshold_mode == ThresholdMode::kUniversal
                                 ? config.c
                                 : store.class_frequency(h);
    pred[h] = posteriors[h] > threshold ? 1 : 0;
  }
  return pred;
}

namespace {

PredictionSet predict_one(const ProjectionModel &model, const Datastore &store,
                          const PairSample &sample, const InferenceConfig &config) {
  if (sample.x.size() != static_cast<std::size_t>(model.arch.input_dim)) {
    throw ShapeError("sample has " + std::to_string(sample.x.size()) +
                     " features, model expects " +
                     std::to_string(model.arch.input_dim));
  }
  const auto z = project(model, sample.x);
  const auto neighbors = knn_query(store, z, config.k);
  PredictionSet out;
  out.id = sample.id;
  out.posteriors = posterior(store, neighbors, config);
  out.pred = sharp_predict(out.posteriors, store, config);
  out.confidence = confidence_score(out.posteriors, out.pred);
  return out;
}

}  // namespace

BatchPredictions predict_batch(const ProjectionModel &model, const Datastore &store,
                               std::span<const PairSample> test,
                               const InferenceConfig &config, Exec exec) {
  config.validate();
  if (static_cast<std::size_t>(config.k) > store.size()) {
    throw ConfigError("k = " + std::to_string(config.k) + " exceeds datastore size " +
                      std::to_string(store.size()));
  }
  std::vector<std::optional<PredictionSet>> slots(test.size());
  std::vector<std::string> errors(test.size());
  const auto n = static_cast<std::ptrdiff_t>(test.size());
#pragma omp parallel for schedule(dynamic, 16) if (exec == Exec::kParallel)
  for (std::ptrdiff_t si = 0; si < n; ++si) {
    const auto i = static_cast<std::size_t>(si);
    try {
      slots[i] = predict_one(model, store, test[i], config);
    } catch (const std::exception &e) {
      errors[i] = e.what();
    }
  }
  BatchPredictions out;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (slots[i]) {
      out.predictions.push_back(std::move(*slots[i]));
    } else {
      out.failures.push_back({test[i].id, errors[i]});
    }
  }
  return out;
}

}  // namespace score
