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

#include <complex>

namespace bimlab::em {

/// Bessel functions of the first and second kind for orders 0 and 1, x > 0.
struct BesselPair {
  double j;
  double y;
};
BesselPair bessel01(int order, double x);

/// Hankel function of the second kind, H2_n(x) = J_n(x) - i Y_n(x), n in {0, 1}.
///
/// Ascending series evaluated in extended precision for x <= kHankelSeriesLimit,
/// Hankel's asymptotic expansion above it. Relative accuracy is better than 1e-12
/// on [1e-6, 1e4]. Throws DomainError for x <= 0 and ContractError for other orders.
std::complex<double> hankel2(int order, double x);

inline constexpr double kHankelSeriesLimit = 20.0;

}  // namespace bimlab::em
