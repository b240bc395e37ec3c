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

#include <omp.h>

#include <random>

#include "doctest.h"
#include "score/error.h"
#include "score/kernels.h"
#include "test_util.h"

using namespace score;

namespace {

Matrix naive_product(const Matrix &a, const Matrix &b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0;
      for (std::size_t p = 0; p < a.cols(); ++p) s += a(i, p) * b(p, j);
      c(i, j) = s;
    }
  return c;
}

Matrix transpose(const Matrix &a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

void check_close(const Matrix &a, const Matrix &b, double tol) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.data()[i] == doctest::Approx(b.data()[i]).epsilon(tol));
}

}  // namespace

TEST_CASE("gemm variants match a naive triple loop") {
  std::mt19937_64 rng(7);
  const Matrix a = testutil::random_matrix(rng, 13, 9);
  const Matrix b = testutil::random_matrix(rng, 9, 11);
  const Matrix expected = naive_product(a, b);
  check_close(kernels::serial::gemm_nn(a, b), expected, 1e-12);
  check_close(kernels::serial::gemm_nt(a, transpose(b)), expected, 1e-12);
  check_close(kernels::serial::gemm_tn(transpose(a), b), expected, 1e-12);
}

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
  omp_set_num_threads(4);
  std::mt19937_64 rng(11);
  const Matrix a = testutil::random_matrix(rng, 67, 31);
  const Matrix b = testutil::random_matrix(rng, 45, 31);
  const Matrix c = testutil::random_matrix(rng, 31, 29);
  const Matrix d = testutil::random_matrix(rng, 67, 29);
  CHECK(kernels::parallel::gemm_nt(a, b) == kernels::serial::gemm_nt(a, b));
  CHECK(kernels::parallel::gemm_nn(a, c) == kernels::serial::gemm_nn(a, c));
  CHECK(kernels::parallel::gemm_tn(a, d) == kernels::serial::gemm_tn(a, d));
  for (auto mode : {DistanceMode::kEuclidean, DistanceMode::kCosine}) {
    CHECK(kernels::parallel::pairwise_distances(a, b, mode) ==
          kernels::serial::pairwise_distances(a, b, mode));
  }
}

TEST_CASE("pairwise distances follow the distance definitions") {
  std::mt19937_64 rng(3);
  const Matrix q = testutil::random_unit_rows(rng, 5, 4);
  const Matrix s = testutil::random_unit_rows(rng, 7, 4);
  const auto qr = testutil::to_rows(q);
  const auto sr = testutil::to_rows(s);
  for (bool cosine : {false, true}) {
    const Matrix d = kernels::pairwise_distances(
        q, s, cosine ? DistanceMode::kCosine : DistanceMode::kEuclidean, Exec::kParallel);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 7; ++j)
        CHECK(d(i, j) == doctest::Approx(oracle::dist(qr[i], sr[j], cosine)).epsilon(1e-14));
  }
}

TEST_CASE("shape mismatches raise ShapeError") {
  CHECK_THROWS_AS(kernels::serial::gemm_nn(Matrix(2, 3), Matrix(4, 2)), ShapeError);
  CHECK_THROWS_AS(kernels::parallel::gemm_nt(Matrix(2, 3), Matrix(2, 4)), ShapeError);
  CHECK_THROWS_AS(kernels::serial::gemm_tn(Matrix(2, 3), Matrix(3, 3)), ShapeError);
}
