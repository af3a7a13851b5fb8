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
#include <cstddef>

#include <Eigen/Dense>

namespace bimlab {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kJ{0.0, 1.0};

/// Complex contrast over the pixel grid, stored row-major (index = iy * nx + ix).
struct ContrastImage {
  CVector t;
  int nx = 0;
  int ny = 0;

  ContrastImage() = default;
  ContrastImage(CVector values, int nx_, int ny_) : t(std::move(values)), nx(nx_), ny(ny_) {}
  static ContrastImage zeros(int nx, int ny) { return {CVector::Zero(Eigen::Index(nx) * ny), nx, ny}; }

  Eigen::Index size() const { return t.size(); }
};

enum class FieldKind { incident, total };

/// Per-transmitter fields on the pixel grid; column k belongs to transmitter k.
struct FieldSet {
  CMatrix per_tx;
  FieldKind kind = FieldKind::incident;

  Eigen::Index pixel_count() const { return per_tx.rows(); }
  Eigen::Index tx_count() const { return per_tx.cols(); }
};

/// Scattered or measured fields, cascaded transmitter-major:
/// all receivers of transmitter 0, then transmitter 1, and so on.
struct MeasurementVector {
  CVector data;
  int rx_count = 0;
  int tx_count = 0;

  auto block(int tx) { return data.segment(Eigen::Index(tx) * rx_count, rx_count); }
  auto block(int tx) const { return data.segment(Eigen::Index(tx) * rx_count, rx_count); }
};

}  // namespace bimlab
