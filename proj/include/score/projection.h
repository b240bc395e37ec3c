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

#ifndef SCORE_PROJECTION_H_
#define SCORE_PROJECTION_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "score/distance.h"
#include "score/kernels.h"
#include "score/matrix.h"

namespace score {

enum class Activation { kSwish, kRelu };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

// MLP shape: input_dim -> num_layers x width (activated) -> output_dim
// (linear), followed by L2 normalisation onto the unit sphere.
struct ArchConfig {
  int num_layers = 5;
  int width = 500;
  int output_dim = 15;
  Activation activation = Activation::kSwish;
  int input_dim = 0;

  void validate() const;
  double depth_width_ratio() const {
    return static_cast<double>(num_layers) / static_cast<double>(width);
  }
  bool operator==(const ArchConfig &) const = default;
};

struct DenseLayer {
  Matrix weight;  // out x in
  std::vector<double> bias;

  bool operator==(const DenseLayer &) const = default;
};

// Per-layer parameter gradients, shaped like ProjectionModel::layers.
using Gradients = std::vector<DenseLayer>;

struct ProjectionModel {
  ArchConfig arch;
  DistanceMode distance_mode = DistanceMode::kEuclidean;
  double tau = 0.01;
  std::vector<DenseLayer> layers;

  std::size_t num_parameters() const;
  bool operator==(const ProjectionModel &) const = default;
};

// Norm below which a pre-normalisation output is rejected.
inline constexpr double kDegenerateNorm = 1e-12;

// Hidden layers use He-uniform bounds (sqrt(6 / fan_in)), the output layer
// LeCun-uniform (sqrt(3 / fan_in)). Biases start at zero.
ProjectionModel init_model(const ArchConfig &arch, std::uint64_t seed,
                           DistanceMode mode = DistanceMode::kEuclidean,
                           double tau = 0.01);

std::vector<double> project(const ProjectionModel &model, std::span<const double> x);
Matrix project_batch(const ProjectionModel &model, const Matrix &x,
                     Exec exec = Exec::kParallel);

// Activations kept by the forward pass for backpropagation.
struct ForwardCache {
  std::vector<Matrix> inputs;  // inputs[l] feeds layer l
  std::vector<Matrix> pre;     // pre-activations of the hidden layers
  Matrix output;               // unnormalised projection
  std::vector<double> norms;   // row norms of output
  Matrix z;                    // unit-norm rows
};

ForwardCache forward(const ProjectionModel &model, const Matrix &x, Exec exec);

// Backpropagates dL/dz through the normalisation and the MLP.
Gradients backward(const ProjectionModel &model, const ForwardCache &cache,
                   const Matrix &grad_z, Exec exec);

double activate(Activation a, double v);
double activate_derivative(Activation a, double v);

}  // namespace score

#endif  // SCORE_PROJECTION_H_
