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

#include "bimlab/metrics.hpp"

#include <numeric>

#include "bimlab/errors.hpp"

namespace bimlab {

double rne(const CVector& x, const CVector& x_ref) {
  require(x.size() == x_ref.size(), "rne: lengths differ");
  const double ref = x_ref.squaredNorm();
  if (!(ref > 0)) throw DomainError("rne: reference has zero norm");
  return 100.0 * (x - x_ref).squaredNorm() / ref;
}

double mrne(std::span<const double> rnes) {
  require(!rnes.empty(), "mrne: empty set");
  return std::accumulate(rnes.begin(), rnes.end(), 0.0) / double(rnes.size());
}

}  // namespace bimlab
