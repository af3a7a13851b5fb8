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

#include "bimlab/special.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bimlab/errors.hpp"

namespace bimlab::em {

namespace {

using real = long double;

constexpr real kEulerGamma = 0.577215664901532860606512090082402431L;
constexpr real kPiL = 3.141592653589793238462643383279502884L;

// Power series about the origin. The largest term at x = 20 is ~1e7, so the
// 64-bit mantissa leaves about 12 correct digits after cancellation.
BesselPair series(int order, double xd) {
  const real x = xd;
  const real q = x * x / 4;                  // (x/2)^2
  const real log_term = std::log(x / 2) + kEulerGamma;
  constexpr real eps = 1e-22L;

  if (order == 0) {
    real term = 1;  // (-q)^k / (k!)^2
    real harmonic = 0;
    real j0 = 1;
    real ysum = 0;  // sum_{k>=1} (-1)^{k+1} H_k q^k / (k!)^2
    for (int k = 1; k < 200; ++k) {
      term *= -q / (real(k) * k);
      harmonic += real(1) / k;
      j0 += term;
      ysum -= harmonic * term;
      if (std::fabs(term) * (1 + harmonic) < eps * std::fabs(j0) && k > 2) break;
    }
    const real y0 = (2 / kPiL) * (log_term * j0 + ysum);
    return {double(j0), double(y0)};
  }

  // order 1
  real term = x / 2;  // (x/2) (-q)^k / (k! (k+1)!)
  real j1 = term;
  // psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
  real harmonic = 0;
  real psi_sum_acc = term * (real(1) - 2 * kEulerGamma);
  for (int k = 1; k < 200; ++k) {
    term *= -q / (real(k) * (k + 1));
    harmonic += real(1) / k;
    j1 += term;
    const real psi_pair = 2 * harmonic + real(1) / (k + 1) - 2 * kEulerGamma;
    psi_sum_acc += psi_pair * term;
    if (std::fabs(term) * (1 + std::fabs(psi_pair)) < eps * std::fabs(j1) && k > 2) break;
  }
  const real y1 = -2 / (kPiL * x) + (2 / kPiL) * std::log(x / 2) * j1 - psi_sum_acc / kPiL;
  return {double(j1), double(y1)};
}

// H2_n(x) ~ sqrt(2/(pi x)) exp(-i w) sum_k (-i)^k a_k(n) / x^k, w = x - n pi/2 - pi/4.
std::complex<real> asymptotic(int order, double xd) {
  const real x = xd;
  const real mu = 4 * real(order) * order;
  std::complex<real> sum = 1;
  std::complex<real> term = 1;
  const std::complex<real> minus_i(0, -1);
  real prev = 1;
  for (int k = 1; k < 80; ++k) {
    const real odd = 2 * real(k) - 1;
    const std::complex<real> next = term * minus_i * ((mu - odd * odd) / (8 * real(k) * x));
    const real mag = std::abs(next);
    if (mag > prev) break;  // asymptotic series started diverging
    term = next;
    prev = mag;
    sum += term;
    if (mag < 1e-21L) break;
  }
  const real w = x - real(order) * kPiL / 2 - kPiL / 4;
  const std::complex<real> phase(std::cos(w), -std::sin(w));
  return std::sqrt(2 / (kPiL * x)) * phase * sum;
}

void check_args(int order, double x) {
  if (order != 0 && order != 1) throw ContractError("hankel2 supports orders 0 and 1, got " + std::to_string(order));
  if (!(x > 0) || !std::isfinite(x)) throw DomainError("hankel2 requires finite x > 0");
}

}  // namespace

BesselPair bessel01(int order, double x) {
  check_args(order, x);
  if (x <= kHankelSeriesLimit) return series(order, x);
  const auto h = asymptotic(order, x);
  return {double(h.real()), double(-h.imag())};
}

std::complex<double> hankel2(int order, double x) {
  check_args(order, x);
  if (x <= kHankelSeriesLimit) {
    const auto b = series(order, x);
    return {b.j, -b.y};
  }
  const auto h = asymptotic(order, x);
  return {double(h.real()), double(h.imag())};
}

}  // namespace bimlab::em
