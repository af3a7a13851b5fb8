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

#pragma once

#include <functional>

#include "bimlab/types.hpp"

namespace bimlab::em {

/// Square linear map applied column-wise to a block of vectors.
using BlockOperator = std::function<CMatrix(const CMatrix&)>;

struct KrylovResult {
  CVector x;
  double residual = 0;  ///< relative residual ||b - A x|| / ||b||
  int iterations = 0;
  bool breakdown = false;  ///< set if a restart also broke down
};

struct BlockKrylovResult {
  CMatrix x;
  RVector residual;
  Eigen::VectorXi iterations;
  Eigen::Array<bool, Eigen::Dynamic, 1> breakdown;
  bool any_breakdown() const { return breakdown.any(); }
};

/// Breakdown threshold for |omega| and for |rho| / ||b||^2.
inline constexpr double kBreakdownThreshold = 1e-30;

/// Stabilized biconjugate gradient solve of A x = b.
///
/// Stops after max_iters iterations (two operator applications each) or when the
/// relative residual drops to tol. A breakdown restarts once from the current
/// iterate; a second one returns the current iterate with breakdown set.
KrylovResult bicgstab(const BlockOperator& apply, const CVector& b, const CVector& x0, int max_iters, double tol);

/// Independent BiCGStab recurrences for every column of b, sharing one operator
/// application per step. Column k matches bicgstab on column k alone up to
/// accumulation order inside the operator.
BlockKrylovResult bicgstab_block(const BlockOperator& apply, const CMatrix& b, const CMatrix& x0, int max_iters,
                                 double tol);

}  // namespace bimlab::em
