// Copyright 2026 The bimlab Authors.
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

#include <random>

#include "bimlab/errors.hpp"
#include "bimlab/krylov.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace bimlab;
using em::bicgstab;

namespace {

em::BlockOperator matrix_op(const CMatrix& a) {
  return [a](const CMatrix& x) -> CMatrix { return a * x; };
}

CMatrix diagonally_dominant(int n, std::mt19937_64& rng) {
  CMatrix a = testing::random_complex(n, n, rng) * 0.1;
  for (int i = 0; i < n; ++i) a(i, i) += cplx(3.0, 1.0);
  return a;
}

}  // namespace

TEST_CASE("identity operator solves in one iteration") {
  std::mt19937_64 rng(1);
  const CVector b = testing::random_vector(7, rng);
  const auto res = bicgstab(matrix_op(CMatrix::Identity(7, 7)), b, CVector::Zero(7), 1, 0.0);
  CHECK(res.x == b);
  CHECK_FALSE(res.breakdown);
}

TEST_CASE("diagonal solve") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 2;
  a(1, 1) = 4;
  CVector b(2);
  b << 2, 4;
  const auto res = bicgstab(matrix_op(a), b, CVector::Zero(2), 10, 0.0);
  CHECK(std::abs(res.x(0) - 1.0) < 1e-15);
  CHECK(std::abs(res.x(1) - 1.0) < 1e-15);
}

TEST_CASE("random diagonally dominant system matches a dense direct solve") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix a = diagonally_dominant(16, rng);
    const CVector b = testing::random_vector(16, rng);
    const CVector direct = a.partialPivLu().solve(b);
    const auto res = bicgstab(matrix_op(a), b, CVector::Zero(16), 200, 1e-12);
    CHECK(testing::rel_err(res.x, direct) < 1e-9);
    CHECK(res.residual <= 1e-12);
  }
}

TEST_CASE("residual is nonincreasing in the iteration budget") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix a = diagonally_dominant(16, rng);
    const CVector b = testing::random_vector(16, rng);
    double prev = 1e300;
    for (int n : {1, 2, 4, 8, 16}) {
      const auto res = bicgstab(matrix_op(a), b, CVector::Zero(16), n, 0.0);
      const double true_res = (b - a * res.x).norm() / b.norm();
      CHECK(true_res <= prev);
      prev = true_res;
    }
  }
}

TEST_CASE("zero right-hand side returns exactly zero") {
  std::mt19937_64 rng(3);
  const CMatrix a = diagonally_dominant(5, rng);
  const CVector x0 = testing::random_vector(5, rng);
  const auto res = bicgstab(matrix_op(a), CVector::Zero(5), x0, 10, 0.0);
  CHECK(res.x == CVector::Zero(5));
  CHECK(res.residual == 0.0);
}

TEST_CASE("dimension mismatch is a contract error") {
  CHECK_THROWS_AS(bicgstab(matrix_op(CMatrix::Identity(3, 3)), CVector::Ones(3), CVector::Zero(4), 5, 0.0),
                  ContractError);
  CHECK_THROWS_AS(bicgstab(matrix_op(CMatrix::Identity(4, 4)), CVector::Ones(3), CVector::Zero(3), 5, 0.0),
                  ContractError);
}

TEST_CASE("repeated breakdown is flagged, not thrown") {
  // Rotation by 90 degrees: the shadow residual is orthogonal to A r from the start.
  CMatrix a(2, 2);
  a << 0, 1, -1, 0;
  CVector b(2);
  b << 1, 0;
  const auto res = bicgstab(matrix_op(a), b, CVector::Zero(2), 10, 0.0);
  CHECK(res.breakdown);
  CHECK(res.x.allFinite());
}

TEST_CASE("block solve agrees with column-by-column solves") {
  std::mt19937_64 rng(11);
  const CMatrix a = diagonally_dominant(12, rng);
  const CMatrix b = testing::random_complex(12, 4, rng);
  const auto block = em::bicgstab_block(matrix_op(a), b, CMatrix::Zero(12, 4), 6, 0.0);
  for (int c = 0; c < 4; ++c) {
    const auto single = bicgstab(matrix_op(a), b.col(c), CVector::Zero(12), 6, 0.0);
    CHECK(testing::rel_err(block.x.col(c), single.x) < 1e-13);
    CHECK(block.iterations(c) == single.iterations);
  }
}
