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

// Independent reference computations shared by the unit and acceptance tests.
// Nothing here calls into the code path it is used to check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>

namespace bimlab::testing {

using cplx = std::complex<double>;

/// Hankel function of the second kind from Boost.Math's Bessel functions.
inline cplx hankel2_reference(int order, double x) {
  return {boost::math::cyl_bessel_j(order, x), -boost::math::cyl_neumann(order, x)};
}

inline Eigen::MatrixXcd random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

inline Eigen::VectorXcd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  return random_complex(n, 1, rng).col(0);
}

/// Random matrix with orthonormal factors and singular values decaying
/// geometrically at a random rate, the spectral shape of an ill-posed operator.
inline Eigen::MatrixXcd random_ill_posed(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  const Eigen::Index r = std::min(rows, cols);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qu(random_complex(rows, r, rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qv(random_complex(cols, r, rng));
  const Eigen::MatrixXcd u = qu.householderQ() * Eigen::MatrixXcd::Identity(rows, r);
  const Eigen::MatrixXcd v = qv.householderQ() * Eigen::MatrixXcd::Identity(cols, r);
  std::uniform_real_distribution<double> ratio(0.5, 0.9);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  const double q = ratio(rng);
  Eigen::VectorXd s(r);
  double value = scale(rng);
  for (Eigen::Index k = 0; k < r; ++k, value *= q) s(k) = value;
  return u * s.asDiagonal() * v.adjoint();
}

inline double sigma_max_svd(const Eigen::MatrixXcd& m) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

inline double rel_err(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const double den = b.norm();
  return den > 0 ? (a - b).norm() / den : (a - b).norm();
}

}  // namespace bimlab::testing
