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

#include "bimlab/inverse.hpp"

#include <cmath>
#include <random>

#include "bimlab/errors.hpp"

namespace bimlab::inverse {

ObservationMatrix assemble_observation(const em::GreensOperators& ops, const FieldSet& e_tot, int bim_step) {
  require(e_tot.kind == FieldKind::total, "assemble_observation expects total fields");
  require(e_tot.pixel_count() == ops.g_rx.cols(), "assemble_observation: pixel counts differ");
  const Eigen::Index rx = ops.g_rx.rows();
  const Eigen::Index tx = e_tot.tx_count();
  ObservationMatrix out;
  out.bim_step = bim_step;
  out.h.resize(rx * tx, ops.g_rx.cols());
  for (Eigen::Index k = 0; k < tx; ++k)
    out.h.middleRows(k * rx, rx).noalias() = ops.g_rx * e_tot.per_tx.col(k).asDiagonal();
  return out;
}

PowerEstimate power_iteration(const CMatrix& h, int n_pow, std::uint64_t seed) {
  require(n_pow >= 1, "power_iteration: n_pow must be >= 1");
  require(h.cols() > 0, "power_iteration: empty operator");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(h.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(i) = cplx(re, im);
  }
  v.normalize();

  auto gram = [&h](const CVector& x) -> CVector {
    const CVector hx = h * x;
    return h.adjoint() * hx;
  };
  for (int k = 0; k < n_pow; ++k) {
    const CVector w = gram(v);
    const double nw = w.norm();
    if (!(nw > 0) || !std::isfinite(nw)) throw NumericalError("power_iteration: operator annihilates the iterate");
    v = w / nw;
  }
  const double sigma2 = gram(v).norm();
  if (!(sigma2 > 0) || !std::isfinite(sigma2)) throw NumericalError("power_iteration: zero operator");
  return {1.0 / sigma2, std::sqrt(sigma2)};
}

CVector soft_threshold(const CVector& z, double delta) {
  require(delta >= 0, "soft_threshold: delta must be nonnegative");
  if (delta == 0) return z;
  CVector out(z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    const double mag = std::abs(z(k));
    out(k) = mag > delta ? z(k) * ((mag - delta) / mag) : cplx(0.0);
  }
  return out;
}

CVector landweber_step(const CMatrix& h, const CVector& t, const CVector& e_mea, double gamma) {
  require(h.cols() == t.size() && h.rows() == e_mea.size(), "landweber_step: shapes disagree");
  const CVector residual = h * t - e_mea;
  return t - gamma * (h.adjoint() * residual);
}

Regularizer Regularizer::soft_threshold(double delta) {
  require(delta >= 0, "soft-threshold level must be nonnegative");
  return Regularizer(SoftThresholdReg{delta});
}

Regularizer Regularizer::network(std::shared_ptr<const nn::UNetWeights> weights) {
  require(weights != nullptr, "network regularizer needs weights");
  weights->validate();
  return Regularizer(NetworkReg{std::move(weights)});
}

void Regularizer::check_grid(int nx, int ny) const {
  if (const auto* net = std::get_if<NetworkReg>(&kind_)) {
    require(nx % 4 == 0 && ny % 4 == 0, "network regularizer needs grid sides divisible by 4, got " +
                                            std::to_string(nx) + "x" + std::to_string(ny));
    require(net->weights->arch.io_channels == 2, "network regularizer needs a 2-channel network");
  }
}

nn::Tensor to_channels(const CVector& t, int nx, int ny) {
  require(t.size() == Eigen::Index(nx) * ny, "to_channels: length does not match grid");
  nn::Tensor x(2, ny, nx);
  for (Eigen::Index k = 0; k < t.size(); ++k) {
    x.data[std::size_t(k)] = static_cast<float>(t(k).real());
    x.data[x.plane() + std::size_t(k)] = static_cast<float>(t(k).imag());
  }
  return x;
}

CVector from_channels(const nn::Tensor& x) {
  require(x.channels == 2, "from_channels: expected 2 channels");
  CVector t(Eigen::Index(x.plane()));
  for (Eigen::Index k = 0; k < t.size(); ++k)
    t(k) = cplx(double(x.data[std::size_t(k)]), double(x.data[x.plane() + std::size_t(k)]));
  return t;
}

CVector Regularizer::apply(const CVector& t, int nx, int ny) const {
  return std::visit(
      [&](const auto& k) -> CVector {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, IdentityReg>) {
          return t;
        } else if constexpr (std::is_same_v<K, SoftThresholdReg>) {
          return inverse::soft_threshold(t, k.delta);
        } else {
          check_grid(nx, ny);
          return from_channels(nn::unet_forward(*k.weights, to_channels(t, nx, ny)));
        }
      },
      kind_);
}

ContrastImage tista(const CMatrix& h, const CVector& e_mea, double gamma, const Regularizer& reg, int n_lwb,
                    const ContrastImage& t0, std::vector<CVector>* trace) {
  require(n_lwb >= 1, "tista: n_lwb must be >= 1");
  require(gamma > 0 && std::isfinite(gamma), "tista: gamma must be positive");
  require(h.cols() == t0.size(), "tista: initial iterate does not match the operator");
  reg.check_grid(t0.nx, t0.ny);
  ContrastImage t = t0;
  for (int l = 0; l < n_lwb; ++l) {
    t.t = reg.apply(landweber_step(h, t.t, e_mea, gamma), t.nx, t.ny);
    if (trace) trace->push_back(t.t);
  }
  return t;
}

}  // namespace bimlab::inverse
