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

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "bimlab/greens.hpp"
#include "bimlab/nn/unet.hpp"
#include "bimlab/types.hpp"

namespace bimlab::inverse {

/// Cascade of g_rx D(e_tot_k) over transmitters, transmitter-major rows.
struct ObservationMatrix {
  CMatrix h;
  int bim_step = 1;
};

ObservationMatrix assemble_observation(const em::GreensOperators& ops, const FieldSet& e_tot, int bim_step = 1);

struct PowerEstimate {
  double gamma = 0;  ///< 1 / sigma^2
  double sigma = 0;  ///< estimate of the largest singular value of h
};

/// n_pow normalized applications of h^H h from a seeded random unit vector; sigma^2
/// is the norm of h^H h v at the final iterate. Throws NumericalError when h v vanishes.
PowerEstimate power_iteration(const CMatrix& h, int n_pow, std::uint64_t seed);

/// Complex soft thresholding: z |z|^-1 max(|z| - delta, 0), zero stays zero.
CVector soft_threshold(const CVector& z, double delta);

/// t - gamma h^H (h t - e_mea).
CVector landweber_step(const CMatrix& h, const CVector& t, const CVector& e_mea, double gamma);

struct IdentityReg {};
struct SoftThresholdReg {
  double delta = 0;
};
struct NetworkReg {
  std::shared_ptr<const nn::UNetWeights> weights;
};

/// Proximal map applied after every Landweber step.
class Regularizer {
 public:
  static Regularizer identity() { return Regularizer(IdentityReg{}); }
  static Regularizer soft_threshold(double delta);
  static Regularizer network(std::shared_ptr<const nn::UNetWeights> weights);

  /// Image-wise application; grid dims are needed to reshape for the network.
  CVector apply(const CVector& t, int nx, int ny) const;
  /// Throws ContractError if the regularizer cannot act on an nx x ny grid.
  void check_grid(int nx, int ny) const;

  bool is_identity() const { return std::holds_alternative<IdentityReg>(kind_); }

 private:
  explicit Regularizer(std::variant<IdentityReg, SoftThresholdReg, NetworkReg> k) : kind_(std::move(k)) {}
  std::variant<IdentityReg, SoftThresholdReg, NetworkReg> kind_;
};

/// Contrast on an nx x ny grid as a 2-channel (re, im) float tensor and back.
nn::Tensor to_channels(const CVector& t, int nx, int ny);
CVector from_channels(const nn::Tensor& x);

/// n_lwb repetitions of t <- reg(landweber_step(h, t, e_mea, gamma)) from t0.
/// When trace is given, every iterate is appended to it.
ContrastImage tista(const CMatrix& h, const CVector& e_mea, double gamma, const Regularizer& reg, int n_lwb,
                    const ContrastImage& t0, std::vector<CVector>* trace = nullptr);

}  // namespace bimlab::inverse
