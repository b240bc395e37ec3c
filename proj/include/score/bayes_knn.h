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

#ifndef SCORE_BAYES_KNN_H_
#define SCORE_BAYES_KNN_H_

// Multi-label Bayesian kNN over a datastore of projected training vectors.
// Each class h is an independent binary problem; with kernel weights
// w_n = exp(-d_n / tau) over the k nearest neighbours,
//
//   P(h | z) = sum_n p_h y_n^h w_n / sum_n [p_h y_n^h + (1 - p_h)(1 - y_n^h)] w_n
//
// where p_h is 1/2 (flat prior) or n_h / sum_j n_j (informative prior).

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "score/data_model.h"
#include "score/distance.h"
#include "score/kernels.h"
#include "score/matrix.h"
#include "score/projection.h"

namespace score {

enum class PriorMode { kFlat, kInformative };
enum class ThresholdMode { kUniversal, kClassSpecific };

std::string_view to_string(PriorMode m);
std::string_view to_string(ThresholdMode m);
PriorMode parse_prior_mode(std::string_view name);
// Accepts "universal", "class" and "class_specific".
ThresholdMode parse_threshold_mode(std::string_view name);

struct InferenceConfig {
  int k = 15;
  PriorMode prior = PriorMode::kFlat;
  ThresholdMode threshold_mode = ThresholdMode::kUniversal;
  double c = 0.5;

  void validate() const;
  bool operator==(const InferenceConfig &) const = default;
};

// Immutable bank of projected training vectors and their labels.
class Datastore {
 public:
  Datastore(Matrix z, LabelMatrix y, DistanceMode mode, double tau);

  std::size_t size() const { return z_.rows(); }
  std::size_t num_classes() const { return y_.cols(); }
  const Matrix &z() const { return z_; }
  const LabelMatrix &y() const { return y_; }
  const std::vector<std::size_t> &class_counts() const { return counts_; }
  DistanceMode distance_mode() const { return mode_; }
  double tau() const { return tau_; }

  // n_h / sum_j n_j.
  double class_frequency(std::size_t h) const;

 private:
  Matrix z_;
  LabelMatrix y_;
  std::vector<std::size_t> counts_;
  std::size_t total_count_ = 0;
  DistanceMode mode_;
  double tau_;
};

Datastore build_datastore(const ProjectionModel &model,
                          std::span<const PairSample> train, int num_classes,
                          Exec exec = Exec::kParallel);

struct Neighbor {
  std::size_t index;
  double distance;

  bool operator==(const Neighbor &) const = default;
};

// k smallest entries of distances, ascending, ties by ascending index.
std::vector<Neighbor> select_neighbors(std::span<const double> distances, int k);

std::vector<Neighbor> knn_query(const Datastore &store, std::span<const double> z,
                                int k);

double prior_probability(const Datastore &store, std::size_t h, PriorMode mode);

std::vector<double> posterior(const Datastore &store, std::span<const Neighbor> neighbors,
                              const InferenceConfig &config);

// Strict ">" against c (universal) or against n_h / sum_j n_j (class-specific).
std::vector<std::uint8_t> sharp_predict(std::span<const double> posteriors,
                                        const Datastore &store,
                                        const InferenceConfig &config);

struct PredictionSet {
  std::string id;
  std::vector<double> posteriors;
  std::vector<std::uint8_t> pred;
  double confidence = 0.0;

  bool operator==(const PredictionSet &) const = default;
};

struct PredictionFailure {
  std::string id;
  std::string message;
};

struct BatchPredictions {
  std::vector<PredictionSet> predictions;
  std::vector<PredictionFailure> failures;
};

// project -> knn_query -> posterior -> sharp_predict -> confidence, per test
// sample, in input order. Failing samples are reported and skipped.
BatchPredictions predict_batch(const ProjectionModel &model, const Datastore &store,
                               std::span<const PairSample> test,
                               const InferenceConfig &config,
                               Exec exec = Exec::kParallel);

}  // namespace score

#endif  // SCORE_BAYES_KNN_H_
