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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bimlab/forward.hpp"
#include "bimlab/inverse.hpp"

namespace bimlab::inverse {

struct ReconstructionResult {
  ContrastImage final;
  std::vector<ContrastImage> per_step;
  std::vector<double> gammas;
  std::vector<double> sigmas;
  /// ||H_i t_i - e_mea|| / ||e_mea|| (absolute norm when e_mea = 0).
  std::vector<double> misfits;
  std::uint64_t power_seed = 0;
  bool state_breakdown = false;
};

struct BimOptions {
  /// Step i seeds its power iteration with power_seed + i.
  std::uint64_t power_seed = 0;
  /// Per-step iterate traces of the inner solver, for equivalence checks.
  std::vector<std::vector<CVector>>* inner_trace = nullptr;
};

/// Born iterative loop: Born initialization, then per step assemble H_i, set
/// gamma_i by power iteration, run the inner solver warm-started from t_{i-1}
/// with regularizer per_step[i-1], and refresh total fields with n_bcg BiCGStab
/// iterations.
ReconstructionResult bim(const em::ForwardModel& model, const MeasurementVector& e_mea,
                         std::span<const Regularizer> per_step, const BimOptions& options = {});

/// Sparse variant: soft thresholding at config.sbim_delta in every step.
ReconstructionResult sbim(const em::ForwardModel& model, const MeasurementVector& e_mea,
                          const BimOptions& options = {});

/// Trained variant: network regularizer weights[i-1] at step i.
ReconstructionResult tbim(const em::ForwardModel& model, const MeasurementVector& e_mea,
                          const std::vector<std::shared_ptr<const nn::UNetWeights>>& weights,
                          const BimOptions& options = {});

/// Unregularized variant (plain Landweber inner loop).
ReconstructionResult landweber_bim(const em::ForwardModel& model, const MeasurementVector& e_mea,
                                   const BimOptions& options = {});

/// Export as {manifest.json, result.bin}: tensors "final" (ny, nx) and "per_step"
/// (n_bim, ny, nx) in complex64; step lengths and misfits in the manifest.
/// extra_json is merged into the manifest's top level.
void save_result(const ReconstructionResult& result, const std::filesystem::path& dir,
                 const std::string& extra_json = "{}");
ReconstructionResult load_result(const std::filesystem::path& dir);

}  // namespace bimlab::inverse
