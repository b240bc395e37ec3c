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

#ifndef SCORE_TESTS_TEST_UTIL_H_
#define SCORE_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "oracles.h"
#include "score/contrastive_loss.h"
#include "score/data_model.h"
#include "score/matrix.h"
#include "score/projection.h"

namespace testutil {

inline score::Matrix to_matrix(const oracle::Rows &rows) {
  score::Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  return m;
}

inline oracle::Rows to_rows(const score::Matrix &m) {
  oracle::Rows rows;
  for (std::size_t i = 0; i < m.rows(); ++i) rows.emplace_back(m.row(i).begin(), m.row(i).end());
  return rows;
}

inline score::LabelMatrix to_labels(const oracle::Bits &bits) {
  score::LabelMatrix m(bits.size(), bits.empty() ? 0 : bits[0].size());
  for (std::size_t i = 0; i < bits.size(); ++i)
    for (std::size_t h = 0; h < bits[i].size(); ++h) m(i, h) = static_cast<std::uint8_t>(bits[i][h]);
  return m;
}

inline score::LabelMatrix labels_from_sets(const oracle::LabelSets &sets, std::size_t r) {
  score::LabelMatrix m(sets.size(), r);
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (int h : sets[i]) m(i, static_cast<std::size_t>(h)) = 1;
  return m;
}

inline score::Matrix random_matrix(std::mt19937_64 &rng, std::size_t rows, std::size_t cols,
                                   double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  score::Matrix m(rows, cols);
  for (double &v : m.data()) v = g(rng);
  return m;
}

inline score::Matrix random_unit_rows(std::mt19937_64 &rng, std::size_t rows, std::size_t dim) {
  oracle::Rows r;
  for (std::size_t i = 0; i < rows; ++i) r.push_back(oracle::random_unit(rng, dim));
  return to_matrix(r);
}

// Symmetric relative error with an absolute floor for near-zero gradients.
inline double relative_error(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
};

// Compares analytic gradients against central differences on every
// parameter of model.
inline GradCheck check_gradients(const score::ProjectionModel &model, const score::Matrix &x,
                                 const score::LabelMatrix &y, score::DistanceMode mode,
                                 double tau, double eps, double floor) {
  const auto analytic = score::loss_gradients(model, x, y, mode, tau);
  score::ProjectionModel probe = model;
  const auto loss_at = [&](const score::ProjectionModel &m) {
    return score::supcon_multilabel_loss(score::project_batch(m, x, score::Exec::kSerial), y,
                                         mode, tau);
  };
  GradCheck out;
  const auto visit = [&](std::span<double> params, std::span<const double> grads) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double saved = params[i];
      params[i] = saved + eps;
      const double up = loss_at(probe);
      params[i] = saved - eps;
      const double down = loss_at(probe);
      params[i] = saved;
      const double numeric = (up - down) / (2 * eps);
      out.max_rel_error = std::max(out.max_rel_error, relative_error(grads[i], numeric, floor));
      ++out.checked;
    }
  };
  for (std::size_t l = 0; l < probe.layers.size(); ++l) {
    visit(probe.layers[l].weight.data(), analytic.grads[l].weight.data());
    visit(probe.layers[l].bias, analytic.grads[l].bias);
  }
  return out;
}

class TempDir {
 public:
  explicit TempDir(const std::string &tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("score_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path &path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil

#endif  // SCORE_TESTS_TEST_UTIL_H_
