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

#include "score/contrastive_loss.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "score/error.h"

namespace score {
namespace {

void check_batch(const Matrix &z, const LabelMatrix &y, double tau) {
  if (!(tau > 0.0)) throw ConfigError("temperature tau must be > 0");
  if (z.rows() < 2) throw ConfigError("contrastive batch needs at least 2 samples");
  if (y.rows() != z.rows()) {
    throw ShapeError("label rows (" + std::to_string(y.rows()) +
                     ") differ from batch size (" + std::to_string(z.rows()) + ")");
  }
}

int overlap(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  int n = 0;
  for (std::size_t h = 0; h < a.size(); ++h) n += a[h] & b[h];
  return n;
}

// Per-anchor loss term and, optionally, its derivative w.r.t. row i of the
// distance matrix (scaled by 1/N outside).
double anchor_term(const Matrix &dist, const LabelMatrix &y, std::size_t i,
                   double tau, std::span<double> dterm) {
  const std::size_t n = dist.rows();
  int positives = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k != i) positives += overlap(y.row(i), y.row(k));
  }
  if (positives == 0) return 0.0;

  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    if (k != i) max_logit = std::max(max_logit, -dist(i, k) / tau);
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k != i) sum += std::exp(-dist(i, k) / tau - max_logit);
  }
  const double log_norm = max_logit + std::log(sum);

  double term = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const double beta = static_cast<double>(overlap(y.row(i), y.row(j))) / positives;
    if (beta > 0.0) term += beta * (dist(i, j) / tau + log_norm);
    if (!dterm.empty()) {
      const double p = std::exp(-dist(i, j) / tau - log_norm);
      dterm[j] = (beta - p) / tau;
    }
  }
  return term;
}

}  // namespace

double supcon_multilabel_loss(const Matrix &z, const LabelMatrix &y,
                              DistanceMode mode, double tau, Exec exec) {
  check_batch(z, y, tau);
  const Matrix dist = kernels::pairwise_distances(z, z, mode, exec);
  double total = 0.0;
  for (std::size_t i = 0; i < z.rows(); ++i) total += anchor_term(dist, y, i, tau, {});
  return total / static_cast<double>(z.rows());
}

LossWithGrad supcon_multilabel_loss_with_grad(const Matrix &z, const LabelMatrix &y,
                                              DistanceMode mode, double tau,
                                              Exec exec) {
  check_batch(z, y, tau);
  const std::size_t n = z.rows();
  const Matrix dist = kernels::pairwise_distances(z, z, mode, exec);

  // coef(i, j) = dL/dD_ij from anchor i's term.
  Matrix coef(n, n);
  std::vector<double> terms(n, 0.0);
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (exec == Exec::kParallel)
  for (std::ptrdiff_t si = 0; si < sn; ++si) {
    const auto i = static_cast<std::size_t>(si);
    terms[i] = anchor_term(dist, y, i, tau, coef.row(i));
  }

  LossWithGrad out;
  for (double t : terms) out.loss += t;
  const double inv_n = 1.0 / static_cast<double>(n);
  out.loss *= inv_n;

  // D is symmetric, so D_ij receives coefficients from anchors i and j.
  out.grad_z = Matrix(n, z.cols());
#pragma omp parallel for schedule(static) if (exec == Exec::kParallel)
  for (std::ptrdiff_t si = 0; si < sn; ++si) {
    const auto i = static_cast<std::size_t>(si);
    auto g = out.grad_z.row(i);
    const auto zi = z.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double c = (coef(i, j) + coef(j, i)) * inv_n;
      if (c == 0.0) continue;
      const auto zj = z.row(j);
      if (mode == DistanceMode::kEuclidean) {
        const double d = dist(i, j);
        if (d > 0.0) {
          for (std::size_t q = 0; q < g.size(); ++q) g[q] += c * (zi[q] - zj[q]) / d;
        }
      } else {
        for (std::size_t q = 0; q < g.size(); ++q) g[q] -= c * zj[q];
      }
    }
  }
  return out;
}

LossGradients loss_gradients(const ProjectionModel &model, const Matrix &x,
                             const LabelMatrix &y, DistanceMode mode, double tau,
                             Exec exec) {
  const ForwardCache cache = forward(model, x, exec);
  auto lg = supcon_multilabel_loss_with_grad(cache.z, y, mode, tau, exec);
  return {lg.loss, backward(model, cache, lg.grad_z, exec)};
}

}  // namespace score
