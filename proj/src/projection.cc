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

#include "score/projection.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "score/error.h"
#include "score/rng.h"

namespace score {

std::string_view to_string(Activation a) {
  return a == Activation::kSwish ? "swish" : "relu";
}

Activation parse_activation(std::string_view name) {
  if (name == "swish") return Activation::kSwish;
  if (name == "relu") return Activation::kRelu;
  throw ConfigError("unknown activation '" + std::string(name) +
                    "' (expected swish|relu)");
}

void ArchConfig::validate() const {
  if (num_layers < 1) throw ConfigError("arch.num_layers must be >= 1");
  if (output_dim < 2) throw ConfigError("arch.output_dim must be >= 2");
  if (width < output_dim) throw ConfigError("arch.width must be >= arch.output_dim");
  if (input_dim < 1) throw ConfigError("arch.input_dim must be >= 1");
}

std::size_t ProjectionModel::num_parameters() const {
  std::size_t n = 0;
  for (const auto &l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

double activate(Activation a, double v) {
  if (a == Activation::kRelu) return v > 0.0 ? v : 0.0;
  return v / (1.0 + std::exp(-v));
}

double activate_derivative(Activation a, double v) {
  if (a == Activation::kRelu) return v > 0.0 ? 1.0 : 0.0;
  const double s = 1.0 / (1.0 + std::exp(-v));
  return s + v * s * (1.0 - s);
}

ProjectionModel init_model(const ArchConfig &arch, std::uint64_t seed,
                           DistanceMode mode, double tau) {
  arch.validate();
  ProjectionModel model;
  model.arch = arch;
  model.distance_mode = mode;
  model.tau = tau;
  Rng rng(seed);
  int fan_in = arch.input_dim;
  for (int l = 0; l <= arch.num_layers; ++l) {
    const bool last = l == arch.num_layers;
    const int fan_out = last ? arch.output_dim : arch.width;
    const double bound = std::sqrt((last ? 3.0 : 6.0) / fan_in);
    DenseLayer layer{Matrix(static_cast<std::size_t>(fan_out),
                            static_cast<std::size_t>(fan_in)),
                     std::vector<double>(static_cast<std::size_t>(fan_out), 0.0)};
    for (double &w : layer.weight.data()) w = rng.uniform(-bound, bound);
    model.layers.push_back(std::move(layer));
    fan_in = fan_out;
  }
  return model;
}

ForwardCache forward(const ProjectionModel &model, const Matrix &x, Exec exec) {
  if (x.cols() != static_cast<std::size_t>(model.arch.input_dim)) {
    throw ShapeError("projection input has " + std::to_string(x.cols()) +
                     " features, model expects " +
                     std::to_string(model.arch.input_dim));
  }
  ForwardCache cache;
  const std::size_t hidden = model.layers.size() - 1;
  Matrix h = x;
  for (std::size_t l = 0; l < hidden; ++l) {
    Matrix pre = kernels::gemm_nt(h, model.layers[l].weight, exec);
    kernels::add_row_bias(pre, model.layers[l].bias);
    Matrix act(pre.rows(), pre.cols());
    auto src = pre.data();
    auto dst = act.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i] = activate(model.arch.activation, src[i]);
    }
    cache.inputs.push_back(std::move(h));
    cache.pre.push_back(std::move(pre));
    h = std::move(act);
  }
  cache.output = kernels::gemm_nt(h, model.layers[hidden].weight, exec);
  kernels::add_row_bias(cache.output, model.layers[hidden].bias);
  cache.inputs.push_back(std::move(h));

  cache.z = Matrix(cache.output.rows(), cache.output.cols());
  cache.norms.resize(cache.output.rows());
  for (std::size_t i = 0; i < cache.output.rows(); ++i) {
    const auto u = cache.output.row(i);
    double sq = 0.0;
    for (double v : u) sq += v * v;
    const double norm = std::sqrt(sq);
    if (!(norm >= kDegenerateNorm) || !std::isfinite(norm)) {
      throw DegenerateVectorError("projection of row " + std::to_string(i) +
                                  " has norm " + std::to_string(norm) +
                                  " (degenerate or non-finite)");
    }
    cache.norms[i] = norm;
    auto z = cache.z.row(i);
    for (std::size_t c = 0; c < u.size(); ++c) z[c] = u[c] / norm;
  }
  return cache;
}

Matrix project_batch(const ProjectionModel &model, const Matrix &x, Exec exec) {
  return forward(model, x, exec).z;
}

std::vector<double> project(const ProjectionModel &model, std::span<const double> x) {
  Matrix m(1, x.size());
  std::ranges::copy(x, m.row(0).begin());
  const Matrix z = project_batch(model, m, Exec::kSerial);
  return {z.data().begin(), z.data().end()};
}

Gradients backward(const ProjectionModel &model, const ForwardCache &cache,
                   const Matrix &grad_z, Exec exec) {
  const std::size_t n = grad_z.rows();
  const std::size_t out_dim = grad_z.cols();
  // z = u / |u|  =>  du = (g - z (z.g)) / |u|
  Matrix delta(n, out_dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto g = grad_z.row(i);
    const auto z = cache.z.row(i);
    double zg = 0.0;
    for (std::size_t c = 0; c < out_dim; ++c) zg += z[c] * g[c];
    auto d = delta.row(i);
    for (std::size_t c = 0; c < out_dim; ++c) d[c] = (g[c] - z[c] * zg) / cache.norms[i];
  }

  Gradients grads(model.layers.size());
  for (std::size_t l = model.layers.size(); l-- > 0;) {
    grads[l].weight = kernels::gemm_tn(delta, cache.inputs[l], exec);
    grads[l].bias = kernels::column_sums(delta);
    if (l == 0) break;
    Matrix prev = kernels::gemm_nn(delta, model.layers[l].weight, exec);
    const auto pre = cache.pre[l - 1].data();
    auto p = prev.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] *= activate_derivative(model.arch.activation, pre[i]);
    }
    delta = std::move(prev);
  }
  return grads;
}

}  // namespace score
