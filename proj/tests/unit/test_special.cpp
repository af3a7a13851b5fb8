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

#include <cmath>

#include "bimlab/errors.hpp"
#include "bimlab/special.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using bimlab::em::hankel2;

namespace {

// Plain double-precision power series, good to ~1e-13 for x <= 2.
std::complex<double> hankel0_series_oracle(double x) {
  const double gamma = 0.57721566490153286061;
  double term = 1, j0 = 1, harmonic = 0, ysum = 0;
  for (int k = 1; k < 60; ++k) {
    term *= -(x * x / 4) / (double(k) * k);
    harmonic += 1.0 / k;
    j0 += term;
    ysum -= harmonic * term;
  }
  const double y0 = (2 / M_PI) * ((std::log(x / 2) + gamma) * j0 + ysum);
  return {j0, -y0};
}

}  // namespace

TEST_CASE("hankel2 order 0 at x = 1") {
  const auto h = hankel2(0, 1.0);
  CHECK(h.real() == doctest::Approx(0.7651976866).epsilon(1e-10));
  CHECK(h.imag() == doctest::Approx(-0.0882569642).epsilon(1e-9));
  CHECK(std::abs(h - hankel0_series_oracle(1.0)) < 1e-13);
}

TEST_CASE("hankel2 rejects nonpositive arguments and unsupported orders") {
  CHECK_THROWS_AS(hankel2(0, 0.0), bimlab::DomainError);
  CHECK_THROWS_AS(hankel2(0, -1.0), bimlab::DomainError);
  CHECK_THROWS_AS(hankel2(1, std::nan("")), bimlab::DomainError);
  CHECK_THROWS_AS(hankel2(2, 1.0), bimlab::ContractError);
}

TEST_CASE("hankel2 large-argument magnitude") {
  const double expected = std::sqrt(2.0 / (M_PI * 100.0));
  CHECK(std::abs(std::abs(hankel2(0, 100.0)) - expected) / expected < 5e-3);
}

TEST_CASE("hankel2 is continuous across the series/asymptotic switch") {
  const double x = bimlab::em::kHankelSeriesLimit;
  for (int order : {0, 1}) {
    const auto below = hankel2(order, std::nextafter(x, 0.0));
    const auto above = hankel2(order, std::nextafter(x, 100.0));
    CHECK(std::abs(below - above) / std::abs(below) < 1e-11);
  }
}

TEST_CASE("hankel2 agrees with Boost.Math on sampled points") {
  for (double x : {1e-6, 1e-3, 0.1, 0.5, 2.4048, 3.8317, 7.9, 8.0, 8.1, 15.0, 19.99, 20.01, 35.0, 1e3, 1e4}) {
    for (int order : {0, 1}) {
      const auto ref = bimlab::testing::hankel2_reference(order, x);
      CAPTURE(x);
      CAPTURE(order);
      CHECK(std::abs(hankel2(order, x) - ref) / std::abs(ref) < 1e-11);
    }
  }
}

TEST_CASE("bessel01 splits the Hankel value") {
  const auto b = bimlab::em::bessel01(1, 3.0);
  const auto h = hankel2(1, 3.0);
  CHECK(b.j == h.real());
  CHECK(b.y == -h.imag());
}
