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
#include <functional>
#include <string>
#include <vector>

#include "bimlab/config.hpp"
#include "bimlab/forward.hpp"
#include "bimlab/types.hpp"

namespace bimlab::data {

struct Cylinder {
  double center_x = 0;
  double center_y = 0;
  double radius = 0;
  double contrast = 0;
  bool operator==(const Cylinder&) const = default;
};

struct SceneSpec {
  std::vector<Cylinder> cylinders;
  std::uint64_t seed = 0;
  bool operator==(const SceneSpec&) const = default;
};

/// Sampling ranges for random scenes. The domain is centered on the origin.
struct SceneParams {
  double domain_width_m = 4.8;
  double domain_height_m = 4.8;
  double r_min_m = 0.3;
  double r_max_m = 1.2;
  double contrast_min = 0.1;
  double contrast_max = 0.9;
  int max_cylinders = 3;
  int max_attempts = 100;

  /// Domain from the grid, radii [2, 8] pixels capped at half the domain.
  static SceneParams from_config(const ProblemConfig& config);
  void validate() const;  // throws ConfigError
};

/// Cylinder count uniform on {1..max}, radius, center and contrast uniform;
/// a candidate overlapping an accepted cylinder is redrawn up to max_attempts
/// times, after which the scene keeps fewer cylinders.
SceneSpec random_scene(const SceneParams& params, std::uint64_t seed);

/// Throws ConfigError if the scene breaks any range or containment rule.
void validate_scene(const SceneSpec& scene, const SceneParams& params);

/// Pixel takes a cylinder's contrast when its center lies inside the disk.
ContrastImage rasterize(const SceneSpec& scene, const ProblemConfig& config);

enum class Split { train, valid, test };
std::string to_string(Split s);
Split split_from_string(const std::string& s);  // throws ConfigError
int split_offset(Split s);

/// base_seed + offset(split) * 1e9 + index.
std::uint64_t example_seed(std::uint64_t base_seed, Split split, std::uint64_t index);

/// SplitMix64 mix of (base, index) for independent per-example streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct SplitSizes {
  int train = 4000;
  int valid = 200;
  int test = 200;
};

struct DatasetSplit {
  Split split = Split::test;
  std::vector<SceneSpec> scenes;
  std::vector<ContrastImage> contrasts;               ///< complex64 precision
  std::vector<MeasurementVector> measurements;  ///< noiseless, complex64 precision
  std::string config_hash;
  std::uint64_t base_seed = 0;

  std::size_t size() const { return scenes.size(); }
};

/// Simulates one split: scene, rasterize, accurate forward solve, per example.
DatasetSplit generate_split(const em::ForwardModel& model, const SceneParams& params, Split split, int count,
                            std::uint64_t base_seed, int jobs = 1);

/// Writes {split}/{scenes.json, contrasts.bin, measurements.bin, manifest.json};
/// the manifest goes last and marks the split complete.
void save_split(const DatasetSplit& split, const ProblemConfig& config, const SceneParams& params,
                const std::filesystem::path& root);

/// Throws IoError if the manifest is missing (incomplete or absent split).
DatasetSplit load_split(const std::filesystem::path& root, Split split);

/// Generates all three splits under root plus root/config.json.
void generate_dataset(const ProblemConfig& config, const SplitSizes& sizes, std::uint64_t base_seed,
                      const std::filesystem::path& root, const SceneParams& params, int jobs = 1);

/// Configuration stored with a dataset.
ProblemConfig load_dataset_config(const std::filesystem::path& root);

/// Runs fn(i) for i in [0, count) on up to jobs threads.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

}  // namespace bimlab::data
