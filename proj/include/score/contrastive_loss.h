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

#ifndef SCORE_CONTRASTIVE_LOSS_H_
#define SCORE_CONTRASTIVE_LOSS_H_

// Multi-label supervised contrastive loss over one batch of unit vectors:
//
//   L = -(1/N) sum_i sum_{j != i} beta_ij log( w_ij / sum_{k != i} w_ik )
//   w_ij    = exp(-D(z_i, z_j) / tau)
//   beta_ij = (y_i . y_j) / sum_{k != i} (y_i . y_k)
//
// Anchors without any label overlap in the batch contribute nothing but still
// count in N.

#include "score/data_model.h"
#include "score/distance.h"
#include "score/kernels.h"
#include "score/matrix.h"
#include "score/projection.h"

namespace score {

double supcon_multilabel_loss(const Matrix &z, const LabelMatrix &y,
                              DistanceMode mode, double tau,
                              Exec exec = Exec::kSerial);

struct LossWithGrad {
  double loss = 0.0;
  Matrix grad_z;  // dL/dz, same shape as z
};

LossWithGrad supcon_multilabel_loss_with_grad(const Matrix &z, const LabelMatrix &y,
                                              DistanceMode mode, double tau,
                                              Exec exec = Exec::kSerial);

struct LossGradients {
  double loss = 0.0;
  Gradients grads;
};

// Gradient of the loss composed with the projection head, w.r.t. every
// parameter of model.
LossGradients loss_gradients(const ProjectionModel &model, const Matrix &x,
                             const LabelMatrix &y, DistanceMode mode, double tau,
                             Exec exec = Exec::kSerial);

}  // namespace score

#endif  // SCORE_CONTRASTIVE_LOSS_H_
