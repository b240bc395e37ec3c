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

#ifndef SCORE_KERNELS_H_
#define SCORE_KERNELS_H_

// Dense kernels used by the projection head and by kNN inference.
//
// Every kernel exists twice: a plain serial reference in kernels::serial and
// an OpenMP version in kernels::parallel. The parallel versions split work
// over output rows only and keep each element's reduction order identical to
// the reference, so both produce bit-identical results for any thread count.
// Callers select one through Exec.

#include <span>

#include "score/distance.h"
#include "score/matrix.h"

namespace score {

enum class Exec { kSerial, kParallel };

namespace kernels {

namespace serial {
// C = A * B^T; A is n x k, B is m x k.
Matrix gemm_nt(const Matrix &a, const Matrix &b);
// C = A * B; A is n x k, B is k x m.
Matrix gemm_nn(const Matrix &a, const Matrix &b);
// C = A^T * B; A is k x n, B is k x m.
Matrix gemm_tn(const Matrix &a, const Matrix &b);
// D(i, j) = distance(queries row i, store row j).
Matrix pairwise_distances(const Matrix &queries, const Matrix &store,
                          DistanceMode mode);
}  // namespace serial

namespace parallel {
Matrix gemm_nt(const Matrix &a, const Matrix &b);
Matrix gemm_nn(const Matrix &a, const Matrix &b);
Matrix gemm_tn(const Matrix &a, const Matrix &b);
Matrix pairwise_distances(const Matrix &queries, const Matrix &store,
                          DistanceMode mode);
}  // namespace parallel

Matrix gemm_nt(const Matrix &a, const Matrix &b, Exec exec);
Matrix gemm_nn(const Matrix &a, const Matrix &b, Exec exec);
Matrix gemm_tn(const Matrix &a, const Matrix &b, Exec exec);
Matrix pairwise_distances(const Matrix &queries, const Matrix &store,
                          DistanceMode mode, Exec exec);

// Adds bias to every row of m.
void add_row_bias(Matrix &m, std::span<const double> bias);
// Column sums of m, accumulated in row order.
std::vector<double> column_sums(const Matrix &m);

}  // namespace kernels
}  // namespace score

#endif  // SCORE_KERNELS_H_
