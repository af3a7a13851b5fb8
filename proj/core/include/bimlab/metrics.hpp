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

#include <span>

#include "bimlab/types.hpp"

namespace bimlab {

/// Relative squared-norm error in percent: 100 ||x - x_ref||^2 / ||x_ref||^2.
/// Throws DomainError for a zero reference and ContractError on length mismatch.
double rne(const CVector& x, const CVector& x_ref);

/// Mean of a set of RNE values; throws ContractError when empty.
double mrne(std::span<const double> rnes);

}  // namespace bimlab
