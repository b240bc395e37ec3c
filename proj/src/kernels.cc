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

#include "score/kernels.h"

#include <cstddef>

#include "score/error.h"

namespace score {

std::string_view to_string(DistanceMode mode) {
  return mode == DistanceMode::kEuclidean ? "euclidean" : "cosine";
}

DistanceMode parse_distance_mode(std::string_view name) {
  if (name == "euclidean") return DistanceMode::kEuclidean;
  if (name == "cosine") return DistanceMode::kCosine;
  throw ConfigError("unknown distance mode '" + std::string(name) +
                    "' (expected euclidean|cosine)");
}

namespace kernels {
namespace {

void check_inner(std::size_t lhs, std::size_t rhs, const char *op) {
  if (lhs != rhs) {
    throw ShapeError(std::string(op) + ": inner dimensions differ (" +
                     std::to_string(lhs) + " vs " + std::to_string(rhs) + ")");
  }
}

// Row kernels shared by both variants; the variants differ only in how rows
// are distributed.
inline void nt_row(const Matrix &a, const Matrix &b, Matrix &c, std::size_t i) {
  const auto ai = a.row(i);
  for (std::size_t j = 0; j < b.rows(); ++j) {
    const auto bj = b.row(j);
    double acc = 0.0;
    for (std::size_t p = 0; p < ai.size(); ++p) acc += ai[p] * bj[p];
    c(i, j) = acc;
  }
}

inline void nn_row(const Matrix &a, const Matrix &b, Matrix &c, std::size_t i) {
  auto ci = c.row(i);
  for (std::size_t p = 0; p < a.cols(); ++p) {
    const double aip = a(i, p);
    const auto bp = b.row(p);
    for (std::size_t j = 0; j < ci.size(); ++j) ci[j] += aip * bp[j];
  }
}

inline void tn_row(const Matrix &a, const Matrix &b, Matrix &c, std::size_t i) {
  auto ci = c.row(i);
  for (std::size_t p = 0; p < a.rows(); ++p) {
    const double api = a(p, i);
    const auto bp = b.row(p);
    for (std::size_t j = 0; j < ci.size(); ++j) ci[j] += api * bp[j];
  }
}

inline void dist_row(const Matrix &q, const Matrix &s, Matrix &d, std::size_t i,
                     DistanceMode mode) {
  const auto qi = q.row(i);
  for (std::size_t j = 0; j < s.rows(); ++j) d(i, j) = distance(qi, s.row(j), mode);
}

}  // namespace

namespace serial {

Matrix gemm_nt(const Matrix &a, const Matrix &b) {
  check_inner(a.cols(), b.cols(), "gemm_nt");
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) nt_row(a, b, c, i);
  return c;
}

Matrix gemm_nn(const Matrix &a, const Matrix &b) {
  check_inner(a.cols(), b.rows(), "gemm_nn");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) nn_row(a, b, c, i);
  return c;
}

Matrix gemm_tn(const Matrix &a, const Matrix &b) {
  check_inner(a.rows(), b.rows(), "gemm_tn");
  Matrix c(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) tn_row(a, b, c, i);
  return c;
}

Matrix pairwise_distances(const Matrix &queries, const Matrix &store,
                          DistanceMode mode) {
  check_inner(queries.cols(), store.cols(), "pairwise_distances");
  Matrix d(queries.rows(), store.rows());
  for (std::size_t i = 0; i < queries.rows(); ++i) dist_row(queries, store, d, i, mode);
  return d;
}

}  // namespace serial

namespace parallel {

Matrix gemm_nt(const Matrix &a, const Matrix &b) {
  check_inner(a.cols(), b.cols(), "gemm_nt");
  Matrix c(a.rows(), b.rows());
  const auto n = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) nt_row(a, b, c, static_cast<std::size_t>(i));
  return c;
}

Matrix gemm_nn(const Matrix &a, const Matrix &b) {
  check_inner(a.cols(), b.rows(), "gemm_nn");
  Matrix c(a.rows(), b.cols());
  const auto n = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) nn_row(a, b, c, static_cast<std::size_t>(i));
  return c;
}

Matrix gemm_tn(const Matrix &a, const Matrix &b) {
  check_inner(a.rows(), b.rows(), "gemm_tn");
  Matrix c(a.cols(), b.cols());
  const auto n = static_cast<std::ptrdiff_t>(a.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) tn_row(a, b, c, static_cast<std::size_t>(i));
  return c;
}

Matrix pairwise_distances(const Matrix &queries, const Matrix &store,
                          DistanceMode mode) {
  check_inner(queries.cols(), store.cols(), "pairwise_distances");
  Matrix d(queries.rows(), store.rows());
  const auto n = static_cast<std::ptrdiff_t>(queries.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    dist_row(queries, store, d, static_cast<std::size_t>(i), mode);
  }
  return d;
}

}  // namespace parallel

Matrix gemm_nt(const Matrix &a, const Matrix &b, Exec exec) {
  return exec == Exec::kParallel ? parallel::gemm_nt(a, b) : serial::gemm_nt(a, b);
}

Matrix gemm_nn(const Matrix &a, const Matrix &b, Exec exec) {
  return exec == Exec::kParallel ? parallel::gemm_nn(a, b) : serial::gemm_nn(a, b);
}

Matrix gemm_tn(const Matrix &a, const Matrix &b, Exec exec) {
  return exec == Exec::kParallel ? parallel::gemm_tn(a, b) : serial::gemm_tn(a, b);
}

Matrix pairwise_distances(const Matrix &queries, const Matrix &store,
                          DistanceMode mode, Exec exec) {
  return exec == Exec::kParallel ? parallel::pairwise_distances(queries, store, mode)
                                 : serial::pairwise_distances(queries, store, mode);
}

void add_row_bias(Matrix &m, std::span<const double> bias) {
  if (bias.size() != m.cols()) throw ShapeError("add_row_bias: bias length mismatch");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += bias[j];
  }
}

std::vector<double> column_sums(const Matrix &m) {
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out[j] += r[j];
  }
  return out;
}

}  // namespace kernels
}  // namespace score
