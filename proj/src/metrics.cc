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

#include "score/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "score/bayes_knn.h"
#include "score/error.h"

namespace score {
namespace {

void check_same_shape(const LabelMatrix &a, const LabelMatrix &b, const char *what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                     "x" + std::to_string(b.cols()) + ")");
  }
}

double f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  const double denom = static_cast<double>(tp) + 0.5 * static_cast<double>(fp + fn);
  return denom > 0.0 ? static_cast<double>(tp) / denom : 0.0;
}

// Indices of the m most confident predictions, ties by ascending index.
std::vector<std::size_t> most_confident(std::span<const PredictionSet> predictions,
                                        std::size_t m) {
  std::vector<std::size_t> order(predictions.size());
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) {
    return predictions[a].confidence > predictions[b].confidence;
  });
  order.resize(m);
  return order;
}

}  // namespace

std::vector<ClassCounts> confusion_counts(const LabelMatrix &pred,
                                          const LabelMatrix &truth) {
  check_same_shape(pred, truth, "confusion_counts");
  std::vector<ClassCounts> out(pred.cols());
  for (std::size_t i = 0; i < pred.rows(); ++i) {
    for (std::size_t h = 0; h < pred.cols(); ++h) {
      const bool p = pred(i, h) != 0;
      const bool t = truth(i, h) != 0;
      if (p && t) ++out[h].tp;
      else if (p) ++out[h].fp;
      else if (t) ++out[h].fn;
    }
  }
  return out;
}

double micro_f1(const LabelMatrix &pred, const LabelMatrix &truth) {
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto &c : confusion_counts(pred, truth)) {
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
  }
  return f1(tp, fp, fn);
}

std::vector<std::optional<double>> per_class_f1(const LabelMatrix &pred,
                                                const LabelMatrix &truth) {
  std::vector<std::optional<double>> out;
  for (const auto &c : confusion_counts(pred, truth)) {
    if (c.tp + c.fp + c.fn == 0) {
      out.emplace_back();
    } else {
      out.emplace_back(f1(c.tp, c.fp, c.fn));
    }
  }
  return out;
}

double macro_f1(const LabelMatrix &pred, const LabelMatrix &truth) {
  double sum = 0.0;
  std::size_t active = 0;
  for (const auto &v : per_class_f1(pred, truth)) {
    if (!v) continue;
    sum += *v;
    ++active;
  }
  if (active == 0) throw UndefinedMetricError("macro-F1 undefined: no active class");
  return sum / static_cast<double>(active);
}

double confidence_score(std::span<const double> posteriors,
                        std::span<const std::uint8_t> pred) {
  double product = 1.0;
  std::size_t positives = 0;
  for (std::size_t h = 0; h < pred.size(); ++h) {
    if (!pred[h]) continue;
    product *= posteriors[h];
    ++positives;
  }
  if (positives == 0) return 0.0;
  return std::pow(product, 1.0 / static_cast<double>(positives));
}

LabelMatrix prediction_matrix(std::span<const PredictionSet> predictions) {
  const std::size_t cols = predictions.empty() ? 0 : predictions[0].pred.size();
  LabelMatrix m(predictions.size(), cols);
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i].pred.size() != cols) {
      throw ShapeError("prediction '" + predictions[i].id + "' has " +
                       std::to_string(predictions[i].pred.size()) + " classes, expected " +
                       std::to_string(cols));
    }
    std::ranges::copy(predictions[i].pred, m.row(i).begin());
  }
  return m;
}

Matrix posterior_matrix(std::span<const PredictionSet> predictions) {
  const std::size_t cols = predictions.empty() ? 0 : predictions[0].posteriors.size();
  Matrix m(predictions.size(), cols);
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i].posteriors.size() != cols) {
      throw ShapeError("prediction '" + predictions[i].id + "' has " +
                       std::to_string(predictions[i].posteriors.size()) +
                       " posteriors, expected " + std::to_string(cols));
    }
    std::ranges::copy(predictions[i].posteriors, m.row(i).begin());
  }
  return m;
}

F1AtM f1_at_m(std::span<const PredictionSet> predictions, const LabelMatrix &truth,
              std::size_t m) {
  if (predictions.size() != truth.rows()) {
    throw ShapeError("f1_at_m: " + std::to_string(predictions.size()) +
                     " predictions vs " + std::to_string(truth.rows()) + " truth rows");
  }
  if (m > predictions.size()) {
    throw ConfigError("M = " + std::to_string(m) + " exceeds the number of samples (" +
                      std::to_string(predictions.size()) + ")");
  }
  const auto order = most_confident(predictions, m);
  const LabelMatrix all_pred = prediction_matrix(predictions);
  const LabelMatrix sub_pred = all_pred.select_rows(order);
  const LabelMatrix sub_truth = truth.select_rows(order);
  return {micro_f1(sub_pred, sub_truth), macro_f1(sub_pred, sub_truth)};
}

double precision_at_r(const Matrix &posteriors, const LabelMatrix &truth) {
  if (posteriors.rows() != truth.rows() || posteriors.cols() != truth.cols()) {
    throw ShapeError("precision_at_r: shape mismatch");
  }
  double sum = 0.0;
  std::size_t counted = 0;
  std::vector<std::size_t> order(truth.cols());
  for (std::size_t j = 0; j < truth.rows(); ++j) {
    const auto t = truth.row(j);
    const auto r_j = static_cast<std::size_t>(std::count(t.begin(), t.end(), 1));
    if (r_j == 0) continue;
    const auto p = posteriors.row(j);
    std::iota(order.begin(), order.end(), 0);
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
    std::size_t hits = 0;
    for (std::size_t q = 0; q < r_j; ++q) hits += t[order[q]];
    sum += static_cast<double>(hits) / static_cast<double>(r_j);
    ++counted;
  }
  if (counted == 0) throw UndefinedMetricError("P@R undefined: no sample has a true label");
  return sum / static_cast<double>(counted);
}

Matrix phi_matrix(const LabelMatrix &y) {
  const std::size_t r = y.cols();
  const double n = static_cast<double>(y.rows());
  std::vector<double> ones(r, 0.0);
  for (std::size_t i = 0; i < y.rows(); ++i) {
    for (std::size_t h = 0; h < r; ++h) ones[h] += y(i, h);
  }
  Matrix phi(r, r);
  for (std::size_t h = 0; h < r; ++h) {
    for (std::size_t p = 0; p < r; ++p) {
      double n11 = 0.0;
      for (std::size_t i = 0; i < y.rows(); ++i) n11 += y(i, h) & y(i, p);
      const double n10 = ones[h] - n11;
      const double n01 = ones[p] - n11;
      const double n00 = n - n11 - n10 - n01;
      const double denom = ones[h] * (n - ones[h]) * ones[p] * (n - ones[p]);
      phi(h, p) = denom > 0.0 ? (n11 * n00 - n01 * n10) / std::sqrt(denom) : 0.0;
    }
  }
  return phi;
}

double csd(const LabelMatrix &pred, const LabelMatrix &truth) {
  check_same_shape(pred, truth, "csd");
  const Matrix a = phi_matrix(pred);
  const Matrix b = phi_matrix(truth);
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

EvalReport evaluate(std::span<const PredictionSet> predictions, const LabelMatrix &truth,
                    const EvalOptions &options) {
  if (predictions.size() != truth.rows()) {
    throw ShapeError("evaluate: " + std::to_string(predictions.size()) +
                     " predictions vs " + std::to_string(truth.rows()) + " truth rows");
  }
  const LabelMatrix pred = prediction_matrix(predictions);
  const Matrix post = posterior_matrix(predictions);
  if (!predictions.empty()) check_same_shape(pred, truth, "evaluate");

  EvalReport report;
  report.num_samples = truth.rows();
  report.num_classes = truth.cols();
  report.micro_f1 = micro_f1(pred, truth);
  report.per_class_f1 = per_class_f1(pred, truth);
  try {
    report.macro_f1 = macro_f1(pred, truth);
  } catch (const UndefinedMetricError &) {
  }
  try {
    report.p_at_r = precision_at_r(post, truth);
  } catch (const UndefinedMetricError &) {
  }
  report.csd = csd(pred, truth);
  for (std::size_t m : options.m_values) {
    if (m > predictions.size()) {
      throw ConfigError("M = " + std::to_string(m) + " exceeds the number of samples (" +
                        std::to_string(predictions.size()) + ")");
    }
    EvalReport::AtM entry{m, 0.0, std::nullopt};
    try {
      const auto at = f1_at_m(predictions, truth, m);
      entry.micro = at.micro;
      entry.macro = at.macro;
    } catch (const UndefinedMetricError &) {
      // Only macro can be undefined; recompute micro alone.
      const auto order = most_confident(predictions, m);
      entry.micro = micro_f1(pred.select_rows(order), truth.select_rows(order));
    }
    report.at_m.push_back(entry);
  }
  if (options.include_phi) {
    report.phi_pred = phi_matrix(pred);
    report.phi_truth = phi_matrix(truth);
  }
  return report;
}

}  // namespace score
