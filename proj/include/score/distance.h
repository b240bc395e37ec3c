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

#ifndef SCORE_DISTANCE_H_
#define SCORE_DISTANCE_H_

#include <cmath>
#include <span>
#include <string>
#include <string_view>

namespace score {

// Distance used both by the contrastive loss and by kNN inference.
//   euclidean: D = |a - b|_2
//   cosine:    D = 1 - a.b   (inputs are unit vectors)
enum class DistanceMode { kEuclidean, kCosine };

std::string_view to_string(DistanceMode mode);
DistanceMode parse_distance_mode(std::string_view name);

inline double distance(std::span<const double> a, std::span<const double> b,
                       DistanceMode mode) {
  double acc = 0.0;
  if (mode == DistanceMode::kEuclidean) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      acc += d * d;
    }
    return std::sqrt(acc);
  }
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return 1.0 - acc;
}

// Similarity weight w = exp(-D / tau).
inline double kernel_weight(double dist, double tau) {
  return std::exp(-dist / tau);
}

}  // namespace score

#endif  // SCORE_DISTANCE_H_
