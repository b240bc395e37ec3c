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

#ifndef SCORE_METRICS_H_
#define SCORE_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "score/data_model.h"
#include "score/matrix.h"

namespace score {

struct PredictionSet;

struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

std::vector<ClassCounts> confusion_counts(const LabelMatrix &pred,
                                          const LabelMatrix &truth);

// TP / (TP + (FP + FN) / 2) pooled over all cells; 0 when nothing is active.
double micro_f1(const LabelMatrix &pred, const LabelMatrix &truth);

// Per-class F1; nullopt for classes with TP + FP + FN = 0.
std::vector<std::optional<double>> per_class_f1(const LabelMatrix &pred,
                                                const LabelMatrix &truth);

// Mean F1 over classes with TP + FP + FN > 0. Throws UndefinedMetricError if
// there is no such class.
double macro_f1(const LabelMatrix &pred, const LabelMatrix &truth);

// Geometric mean of the posteriors of positively predicted classes; 0 when
// nothing is predicted.
double confidence_score(std::span<const double> posteriors,
                        std::span<const std::uint8_t> pred);

struct F1AtM {
  double micro = 0.0;
  double macro = 0.0;
};

// Micro/macro F1 over the m most confident predictions (ties by row index).
// Row j of truth corresponds to predictions[j].
F1AtM f1_at_m(std::span<const PredictionSet> predictions, const LabelMatrix &truth,
              std::size_t m);

// Mean over samples with R_j > 0 of |top-R_j posteriors ∩ truth| / R_j.
double precision_at_r(const Matrix &posteriors, const LabelMatrix &truth);

// Pearson phi between every pair of label columns; 0 where a column is constant.
Matrix phi_matrix(const LabelMatrix &y);

// Frobenius norm of phi_matrix(pred) - phi_matrix(truth).
double csd(const LabelMatrix &pred, const LabelMatrix &truth);

struct EvalOptions {
  std::vector<std::size_t> m_values;
  bool include_phi = false;
};

struct EvalReport {
  std::size_t num_samples = 0;
  std::size_t num_classes = 0;
  double micro_f1 = 0.0;
  std::optional<double> macro_f1;
  std::vector<std::optional<double>> per_class_f1;
  std::optional<double> p_at_r;
  double csd = 0.0;
  struct AtM {
    std::size_t m;
    double micro;
    std::optional<double> macro;
  };
  std::vector<AtM> at_m;
  std::optional<Matrix> phi_pred;
  std::optional<Matrix> phi_truth;
  std::map<std::string, std::string> config;
};

EvalReport evaluate(std::span<const PredictionSet> predictions, const LabelMatrix &truth,
                    const EvalOptions &options);

LabelMatrix prediction_matrix(std::span<const PredictionSet> predictions);
Matrix posterior_matrix(std::span<const PredictionSet> predictions);

}  // namespace score

#endif  // SCORE_METRICS_H_
