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

#include "bimlab/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "bimlab/errors.hpp"
#include "bimlab/tensor_io.hpp"
#include "json.hpp"

namespace bimlab::data {

using nlohmann::json;
namespace fs = std::filesystem;

SceneParams SceneParams::from_config(const ProblemConfig& config) {
  SceneParams p;
  p.domain_width_m = config.domain_width_m();
  p.domain_height_m = config.domain_height_m();
  const double half = 0.5 * std::min(p.domain_width_m, p.domain_height_m);
  p.r_min_m = std::min(2.0 * config.pixel_size_m, half);
  p.r_max_m = std::min(8.0 * config.pixel_size_m, half);
  return p;
}

void SceneParams::validate() const {
  const double half = 0.5 * std::min(domain_width_m, domain_height_m);
  if (!(r_min_m > 0)) throw ConfigError("r_min must be positive");
  if (r_min_m > half) throw ConfigError("r_min exceeds half the domain (" + std::to_string(half) + " m)");
  if (r_max_m < r_min_m) throw ConfigError("r_max is smaller than r_min");
  if (r_max_m > half) throw ConfigError("r_max exceeds half the domain (" + std::to_string(half) + " m)");
  if (!(contrast_min <= contrast_max)) throw ConfigError("contrast range is empty");
  if (max_cylinders < 1) throw ConfigError("max_cylinders must be >= 1");
  if (max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
}

SceneSpec random_scene(const SceneParams& params, std::uint64_t seed) {
  params.validate();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count_dist(1, params.max_cylinders);
  std::uniform_real_distribution<double> radius_dist(params.r_min_m, params.r_max_m);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> contrast_dist(params.contrast_min, params.contrast_max);

  SceneSpec scene;
  scene.seed = seed;
  const int count = count_dist(rng);
  for (int c = 0; c < count; ++c) {
    for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
      Cylinder cyl;
      cyl.radius = radius_dist(rng);
      const double span_x = params.domain_width_m - 2.0 * cyl.radius;
      const double span_y = params.domain_height_m - 2.0 * cyl.radius;
      cyl.center_x = -0.5 * span_x + span_x * unit(rng);
      cyl.center_y = -0.5 * span_y + span_y * unit(rng);
      cyl.contrast = contrast_dist(rng);
      bool overlaps = false;
      for (const auto& other : scene.cylinders)
        if (std::hypot(cyl.center_x - other.center_x, cyl.center_y - other.center_y) < cyl.radius + other.radius)
          overlaps = true;
      if (!overlaps) {
        scene.cylinders.push_back(cyl);
        break;
      }
    }
  }
  return scene;
}

void validate_scene(const SceneSpec& scene, const SceneParams& params) {
  const auto n = int(scene.cylinders.size());
  if (n < 1 || n > params.max_cylinders) throw ConfigError("scene has " + std::to_string(n) + " cylinders");
  constexpr double slack = 1e-12;
  for (const auto& c : scene.cylinders) {
    if (c.contrast < params.contrast_min || c.contrast > params.contrast_max)
      throw ConfigError("cylinder contrast out of range");
    if (c.radius < params.r_min_m - slack || c.radius > params.r_max_m + slack)
      throw ConfigError("cylinder radius out of range");
    if (std::abs(c.center_x) + c.radius > 0.5 * params.domain_width_m + slack ||
        std::abs(c.center_y) + c.radius > 0.5 * params.domain_height_m + slack)
      throw ConfigError("cylinder leaves the domain");
  }
}

ContrastImage rasterize(const SceneSpec& scene, const ProblemConfig& config) {
  ContrastImage img = ContrastImage::zeros(config.grid_nx, config.grid_ny);
  const double d = config.pixel_size_m;
  const double x0 = -0.5 * config.domain_width_m();
  const double y0 = -0.5 * config.domain_height_m();
  for (int iy = 0; iy < config.grid_ny; ++iy) {
    const double y = y0 + (iy + 0.5) * d;
    for (int ix = 0; ix < config.grid_nx; ++ix) {
      const double x = x0 + (ix + 0.5) * d;
      for (const auto& c : scene.cylinders)
        if (std::hypot(x - c.center_x, y - c.center_y) <= c.radius)
          img.t(Eigen::Index(iy) * config.grid_nx + ix) = cplx(c.contrast, 0.0);
    }
  }
  return img;
}

std::string to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::valid: return "valid";
    case Split::test: return "test";
  }
  return "test";
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "valid") return Split::valid;
  if (s == "test") return Split::test;
  throw ConfigError("unknown split '" + s + "'");
}

int split_offset(Split s) { return static_cast<int>(s); }

std::uint64_t example_seed(std::uint64_t base_seed, Split split, std::uint64_t index) {
  return base_seed + std::uint64_t(split_offset(split)) * 1000000000ULL + index;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (int w = 0; w < jobs; ++w)
    workers.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

DatasetSplit generate_split(const em::ForwardModel& model, const SceneParams& params, Split split, int count,
                            std::uint64_t base_seed, int jobs) {
  params.validate();
  require(count >= 0, "generate_split: negative count");
  DatasetSplit out;
  out.split = split;
  out.config_hash = config_hash(model.config);
  out.base_seed = base_seed;
  out.scenes.resize(std::size_t(count));
  out.contrasts.resize(std::size_t(count));
  out.measurements.resize(std::size_t(count));
  parallel_for(count, jobs, [&](int i) {
    const auto k = std::size_t(i);
    out.scenes[k] = random_scene(params, example_seed(base_seed, split, std::uint64_t(i)));
    out.contrasts[k] = rasterize(out.scenes[k], model.config);
    out.contrasts[k].t = io::to_complex64_precision(out.contrasts[k].t);
    auto mea = em::forward_solve(model, out.contrasts[k]);
    mea.data = io::to_complex64_precision(mea.data);
    out.measurements[k] = std::move(mea);
  });
  return out;
}

namespace {

// Split sizes of the full-scale dataset; manifests record count / full-scale count.
constexpr int kFullScaleTrain = 64000;
constexpr int kFullScaleValid = 2000;
constexpr int kFullScaleTest = 2000;

int full_scale_count(Split s) {
  switch (s) {
    case Split::train: return kFullScaleTrain;
    case Split::valid: return kFullScaleValid;
    case Split::test: return kFullScaleTest;
  }
  return kFullScaleTest;
}

json params_json(const SceneParams& p) {
  return {{"domain_width_m", p.domain_width_m}, {"domain_height_m", p.domain_height_m},
          {"r_min_m", p.r_min_m},               {"r_max_m", p.r_max_m},
          {"contrast_min", p.contrast_min},     {"contrast_max", p.contrast_max},
          {"max_cylinders", p.max_cylinders},   {"max_attempts", p.max_attempts}};
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void save_split(const DatasetSplit& split, const ProblemConfig& config, const SceneParams& params,
                const fs::path& root) {
  const fs::path dir = root / to_string(split.split);
  std::error_code ec;
  fs::remove(dir / "manifest.json", ec);  // an old manifest must not vouch for new payloads
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  json scenes = json::array();
  for (const auto& s : split.scenes) {
    json cyl = json::array();
    for (const auto& c : s.cylinders)
      cyl.push_back({{"center_x", c.center_x}, {"center_y", c.center_y}, {"radius", c.radius}, {"contrast", c.contrast}});
    scenes.push_back({{"seed", s.seed}, {"cylinders", cyl}});
  }
  {
    std::ofstream out(dir / "scenes.json", std::ios::trunc);
    if (!out) throw IoError("cannot write " + (dir / "scenes.json").string());
    out << scenes.dump(1) << '\n';
  }

  const auto n = std::int64_t(split.size());
  std::vector<cplx> contrasts, measurements;
  contrasts.reserve(std::size_t(n) * std::size_t(config.pixel_count()));
  measurements.reserve(std::size_t(n) * std::size_t(config.measurement_count()));
  for (std::size_t k = 0; k < split.size(); ++k) {
    const auto& c = split.contrasts[k].t;
    const auto& m = split.measurements[k].data;
    require(c.size() == config.pixel_count() && m.size() == config.measurement_count(),
            "save_split: example shape does not match the configuration");
    contrasts.insert(contrasts.end(), c.data(), c.data() + c.size());
    measurements.insert(measurements.end(), m.data(), m.data() + m.size());
  }
  io::PayloadWriter wc(dir, "contrasts.bin");
  wc.add("contrasts", {n, config.grid_ny, config.grid_nx}, std::span<const cplx>(contrasts));
  io::PayloadWriter wm(dir, "measurements.bin");
  wm.add("measurements", {n, config.tx_count, config.rx_count}, std::span<const cplx>(measurements));

  io::Manifest manifest;
  manifest.tensors = wc.finish();
  const auto& me = wm.finish();
  manifest.tensors.insert(manifest.tensors.end(), me.begin(), me.end());
  manifest.extra = json{{"format", "bimlab-dataset"},
                        {"split", to_string(split.split)},
                        {"count", n},
                        {"config_hash", config_hash(config)},
                        {"base_seed", split.base_seed},
                        {"scale_factor", double(n) / full_scale_count(split.split)},
                        {"noise", "none (added at consumption)"},
                        {"scene_params", params_json(params)}}
                       .dump();
  io::write_manifest(dir / "manifest.json", manifest);
}

DatasetSplit load_split(const fs::path& root, Split split) {
  const fs::path dir = root / to_string(split);
  if (!fs::exists(dir / "manifest.json"))
    throw IoError("split '" + to_string(split) + "' in " + root.string() + " is missing or incomplete (no manifest)");
  const io::Manifest m = io::read_manifest(dir / "manifest.json");

  DatasetSplit out;
  out.split = split;
  std::int64_t count = 0;
  try {
    const json extra = json::parse(m.extra);
    out.config_hash = extra.at("config_hash").get<std::string>();
    out.base_seed = extra.at("base_seed").get<std::uint64_t>();
    count = extra.at("count").get<std::int64_t>();

    const json scenes = json::parse(read_text(dir / "scenes.json"));
    for (const auto& s : scenes) {
      SceneSpec spec;
      spec.seed = s.at("seed").get<std::uint64_t>();
      for (const auto& c : s.at("cylinders"))
        spec.cylinders.push_back({c.at("center_x").get<double>(), c.at("center_y").get<double>(),
                                  c.at("radius").get<double>(), c.at("contrast").get<double>()});
      out.scenes.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw LoadError(LoadErrorKind::malformed, "malformed dataset split " + dir.string() + ": " + e.what());
  }

  const auto& ce = m.find("contrasts");
  const auto& me = m.find("measurements");
  if (ce.shape.size() != 3 || me.shape.size() != 3 || ce.shape[0] != count || me.shape[0] != count ||
      std::int64_t(out.scenes.size()) != count)
    throw LoadError(LoadErrorKind::shape_mismatch, "dataset split " + dir.string() + " has inconsistent counts");
  const int ny = int(ce.shape[1]), nx = int(ce.shape[2]);
  const int tx = int(me.shape[1]), rx = int(me.shape[2]);
  const auto cvals = io::read_complex64(dir, ce);
  const auto mvals = io::read_complex64(dir, me);
  const auto npix = Eigen::Index(nx) * ny;
  const auto nmea = Eigen::Index(tx) * rx;
  for (std::int64_t k = 0; k < count; ++k) {
    out.contrasts.emplace_back(Eigen::Map<const CVector>(cvals.data() + k * npix, npix), nx, ny);
    out.measurements.push_back({Eigen::Map<const CVector>(mvals.data() + k * nmea, nmea), rx, tx});
  }
  return out;
}

void generate_dataset(const ProblemConfig& config, const SplitSizes& sizes, std::uint64_t base_seed,
                      const fs::path& root, const SceneParams& params, int jobs) {
  config.validate();
  params.validate();
  require(sizes.train >= 0 && sizes.valid >= 0 && sizes.test >= 0, "generate_dataset: negative split size");
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create " + root.string() + ": " + ec.message());
  save_config(config, root / "config.json");

  const auto model = em::ForwardModel::build(config);
  for (auto [split, count] : {std::pair{Split::train, sizes.train}, std::pair{Split::valid, sizes.valid},
                              std::pair{Split::test, sizes.test}}) {
    const auto data = generate_split(model, params, split, count, base_seed, jobs);
    save_split(data, config, params, root);
  }
}

ProblemConfig load_dataset_config(const fs::path& root) { return load_config(root / "config.json"); }

}  // namespace bimlab::data
