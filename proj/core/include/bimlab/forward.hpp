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

#include "bimlab/config.hpp"
#include "bimlab/greens.hpp"
#include "bimlab/types.hpp"

namespace bimlab::em {

/// Iteration budget for the state equation (I + A D(t)) e_tot = e_inc.
struct StateSolveMode {
  int max_iters = 4;
  double tol = 0.0;

  /// Fixed iteration count, no early exit (used inside reconstructions).
  static StateSolveMode fixed(int n_bcg) { return {n_bcg, 0.0}; }
  /// Converged solve used to synthesize measurements.
  static StateSolveMode accurate() { return {500, 1e-10}; }
};

struct StateSolveReport {
  double max_residual = 0;
  bool breakdown = false;
};

/// Total fields for every transmitter, starting BiCGStab from e_inc.
FieldSet solve_state(const GreensOperators& ops, const ContrastImage& t, const FieldSet& e_inc, StateSolveMode mode,
                     StateSolveReport* report = nullptr);

/// Data equation g_rx D(e_tot) t per transmitter, cascaded transmitter-major.
MeasurementVector scattered_fields(const GreensOperators& ops, const ContrastImage& t, const FieldSet& e_tot);

/// Scattered fields under the Born approximation (e_tot := e_inc).
MeasurementVector born_forward(const GreensOperators& ops, const ContrastImage& t, const FieldSet& e_inc);

/// Operators and incident fields for one configuration, built once and shared
/// read-only by every reconstruction on that configuration.
struct ForwardModel {
  ProblemConfig config;
  GreensOperators ops;
  FieldSet e_inc;

  static ForwardModel build(const ProblemConfig& config);
};

/// Noiseless measurements for a scene: operators, accurate state solve, data equation.
MeasurementVector forward_solve(const ProblemConfig& config, const ContrastImage& t);
MeasurementVector forward_solve(const ForwardModel& model, const ContrastImage& t);

/// Adds circular white Gaussian noise at the requested SNR, deterministic per seed.
/// Per-component variance is sigma^2 / 2 with sigma^2 = ||e||^2 / (L 10^(snr/10)).
MeasurementVector add_noise(const MeasurementVector& e_sca, const SnrCondition& snr, std::uint64_t seed);

/// 10 log10(||signal||^2 / ||noisy - signal||^2).
double empirical_snr_db(const MeasurementVector& signal, const MeasurementVector& noisy);

}  // namespace bimlab::em
