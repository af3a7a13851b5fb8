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

#include "bimlab/forward.hpp"

#include <cmath>
#include <random>

#include "bimlab/errors.hpp"
#include "bimlab/krylov.hpp"

namespace bimlab::em {

FieldSet solve_state(const GreensOperators& ops, const ContrastImage& t, const FieldSet& e_inc, StateSolveMode mode,
                     StateSolveReport* report) {
  require(e_inc.kind == FieldKind::incident, "solve_state expects incident fields");
  require(e_inc.pixel_count() == t.size() && ops.a_dom.rows() == t.size(), "solve_state: pixel counts differ");

  const CVector& tv = t.t;
  const BlockOperator apply = [&](const CMatrix& x) -> CMatrix {
    CMatrix out = x;
    out.noalias() += ops.a_dom * (tv.asDiagonal() * x);
    return out;
  };
  const auto res = bicgstab_block(apply, e_inc.per_tx, e_inc.per_tx, mode.max_iters, mode.tol);
  if (report) {
    report->max_residual = res.residual.size() ? res.residual.maxCoeff() : 0.0;
    report->breakdown = res.any_breakdown();
  }
  return {res.x, FieldKind::total};
}

MeasurementVector scattered_fields(const GreensOperators& ops, const ContrastImage& t, const FieldSet& e_tot) {
  require(e_tot.pixel_count() == t.size() && ops.g_rx.cols() == t.size(), "scattered_fields: pixel counts differ");
  const auto rx = int(ops.g_rx.rows());
  const auto tx = int(e_tot.tx_count());
  MeasurementVector out{CVector(Eigen::Index(rx) * tx), rx, tx};
  // Column k of the product is g_rx D(e_tot_k) t.
  const CMatrix weighted = t.t.asDiagonal() * e_tot.per_tx;
  const CMatrix per_tx = ops.g_rx * weighted;
  for (int k = 0; k < tx; ++k) out.block(k) = per_tx.col(k);
  return out;
}

MeasurementVector born_forward(const GreensOperators& ops, const ContrastImage& t, const FieldSet& e_inc) {
  return scattered_fields(ops, t, {e_inc.per_tx, FieldKind::total});
}

ForwardModel ForwardModel::build(const ProblemConfig& config) {
  return {config, build_greens(config), incident_fields(config)};
}

MeasurementVector forward_solve(const ProblemConfig& config, const ContrastImage& t) {
  require(t.size() == config.pixel_count(), "forward_solve: contrast length does not match the grid");
  return forward_solve(ForwardModel::build(config), t);
}

MeasurementVector forward_solve(const ForwardModel& model, const ContrastImage& t) {
  const auto& ops = model.ops;
  StateSolveReport report;
  const auto e_tot = solve_state(ops, t, model.e_inc, StateSolveMode::accurate(), &report);
  if (report.breakdown || !(report.max_residual <= 1e-6))
    throw NumericalError("state solve did not converge (relative residual " + std::to_string(report.max_residual) +
                         ")");
  return scattered_fields(ops, t, e_tot);
}

MeasurementVector add_noise(const MeasurementVector& e_sca, const SnrCondition& snr, std::uint64_t seed) {
  if (snr.is_noiseless()) return e_sca;
  const auto len = e_sca.data.size();
  MeasurementVector out = e_sca;
  if (len == 0) return out;
  const double power = e_sca.data.squaredNorm() / double(len);
  const double sigma2 = power / std::pow(10.0, *snr.db / 10.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
  for (Eigen::Index i = 0; i < len; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    out.data(i) += cplx(re, im);
  }
  return out;
}

double empirical_snr_db(const MeasurementVector& signal, const MeasurementVector& noisy) {
  require(signal.data.size() == noisy.data.size(), "empirical_snr_db: lengths differ");
  return 10.0 * std::log10(signal.data.squaredNorm() / (noisy.data - signal.data).squaredNorm());
}

}  // namespace bimlab::em
