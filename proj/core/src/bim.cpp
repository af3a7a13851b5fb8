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

#include "bimlab/bim.hpp"

#include <cmath>

#include "bimlab/errors.hpp"
#include "bimlab/tensor_io.hpp"
#include "json.hpp"

namespace bimlab::inverse {

using nlohmann::json;
namespace fs = std::filesystem;

ReconstructionResult bim(const em::ForwardModel& model, const MeasurementVector& e_mea,
                         std::span<const Regularizer> per_step, const BimOptions& options) {
  const auto& cfg = model.config;
  require(e_mea.data.size() == cfg.measurement_count(), "bim: measurement length does not match the configuration");
  require(int(per_step.size()) == cfg.n_bim, "bim: need one regularizer per outer step");
  for (const auto& reg : per_step) reg.check_grid(cfg.grid_nx, cfg.grid_ny);

  ReconstructionResult out;
  out.power_seed = options.power_seed;
  if (options.inner_trace) options.inner_trace->clear();

  const double mea_norm = e_mea.data.norm();
  FieldSet e_tot{model.e_inc.per_tx, FieldKind::total};
  ContrastImage t = ContrastImage::zeros(cfg.grid_nx, cfg.grid_ny);

  for (int i = 1; i <= cfg.n_bim; ++i) {
    const ObservationMatrix h = assemble_observation(model.ops, e_tot, i);
    const PowerEstimate pw = power_iteration(h.h, cfg.n_pow, options.power_seed + std::uint64_t(i));

    std::vector<CVector>* trace = nullptr;
    if (options.inner_trace) trace = &options.inner_trace->emplace_back();
    t = tista(h.h, e_mea.data, pw.gamma, per_step[std::size_t(i - 1)], cfg.n_lwb, t, trace);

    const double misfit = (h.h * t.t - e_mea.data).norm();
    out.per_step.push_back(t);
    out.gammas.push_back(pw.gamma);
    out.sigmas.push_back(pw.sigma);
    out.misfits.push_back(mea_norm > 0 ? misfit / mea_norm : misfit);
    if (!t.t.allFinite()) throw NumericalError("bim: non-finite iterate at step " + std::to_string(i));

    if (i < cfg.n_bim) {
      em::StateSolveReport report;
      e_tot = em::solve_state(model.ops, t, model.e_inc, em::StateSolveMode::fixed(cfg.n_bcg), &report);
      out.state_breakdown = out.state_breakdown || report.breakdown;
    }
  }
  out.final = t;
  return out;
}

ReconstructionResult sbim(const em::ForwardModel& model, const MeasurementVector& e_mea, const BimOptions& options) {
  const std::vector<Regularizer> regs(std::size_t(model.config.n_bim),
                                      Regularizer::soft_threshold(model.config.sbim_delta));
  return bim(model, e_mea, regs, options);
}

ReconstructionResult tbim(const em::ForwardModel& model, const MeasurementVector& e_mea,
                          const std::vector<std::shared_ptr<const nn::UNetWeights>>& weights,
                          const BimOptions& options) {
  require(int(weights.size()) == model.config.n_bim,
          "tbim: need " + std::to_string(model.config.n_bim) + " weight bundles, got " +
              std::to_string(weights.size()));
  std::vector<Regularizer> regs;
  for (const auto& w : weights) regs.push_back(Regularizer::network(w));
  return bim(model, e_mea, regs, options);
}

ReconstructionResult landweber_bim(const em::ForwardModel& model, const MeasurementVector& e_mea,
                                   const BimOptions& options) {
  const std::vector<Regularizer> regs(std::size_t(model.config.n_bim), Regularizer::identity());
  return bim(model, e_mea, regs, options);
}

void save_result(const ReconstructionResult& result, const fs::path& dir, const std::string& extra_json) {
  require(!result.per_step.empty(), "save_result: empty result");
  const int nx = result.final.nx, ny = result.final.ny;
  io::PayloadWriter writer(dir, "result.bin");
  writer.add("final", {ny, nx}, std::span<const cplx>(result.final.t.data(), std::size_t(result.final.t.size())));
  std::vector<cplx> steps;
  for (const auto& s : result.per_step) steps.insert(steps.end(), s.t.data(), s.t.data() + s.t.size());
  writer.add("per_step", {std::int64_t(result.per_step.size()), ny, nx}, std::span<const cplx>(steps));

  json j = json::parse(extra_json);
  require(j.is_object(), "save_result: extra must be a JSON object");
  j["format"] = "bimlab-reconstruction";
  j["gammas"] = result.gammas;
  j["sigmas"] = result.sigmas;
  j["misfits"] = result.misfits;
  j["power_seed"] = result.power_seed;
  j["state_breakdown"] = result.state_breakdown;

  io::Manifest m;
  m.tensors = writer.finish();
  m.extra = j.dump();
  io::write_manifest(dir / "manifest.json", m);
}

ReconstructionResult load_result(const fs::path& dir) {
  const io::Manifest m = io::read_manifest(dir / "manifest.json");
  const auto& fe = m.find("final");
  const auto& se = m.find("per_step");
  if (fe.shape.size() != 2 || se.shape.size() != 3 || se.shape[1] != fe.shape[0] || se.shape[2] != fe.shape[1])
    throw LoadError(LoadErrorKind::shape_mismatch, "reconstruction tensors have inconsistent shapes");
  const int ny = int(fe.shape[0]), nx = int(fe.shape[1]);
  const auto n = Eigen::Index(nx) * ny;

  ReconstructionResult r;
  const auto fin = io::read_complex64(dir, fe);
  r.final = ContrastImage(Eigen::Map<const CVector>(fin.data(), n), nx, ny);
  const auto steps = io::read_complex64(dir, se);
  for (std::int64_t s = 0; s < se.shape[0]; ++s)
    r.per_step.emplace_back(Eigen::Map<const CVector>(steps.data() + s * n, n), nx, ny);
  try {
    const json j = json::parse(m.extra);
    r.gammas = j.at("gammas").get<std::vector<double>>();
    r.sigmas = j.at("sigmas").get<std::vector<double>>();
    r.misfits = j.at("misfits").get<std::vector<double>>();
    r.power_seed = j.at("power_seed").get<std::uint64_t>();
    r.state_breakdown = j.value("state_breakdown", false);
  } catch (const json::exception& e) {
    throw LoadError(LoadErrorKind::malformed, "malformed reconstruction manifest in " + dir.string() + ": " + e.what());
  }
  return r;
}

}  // namespace bimlab::inverse
