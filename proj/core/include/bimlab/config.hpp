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
#include <optional>
#include <string>

namespace bimlab {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

/// Signal-to-noise condition; an empty value means noiseless.
struct SnrCondition {
  std::optional<double> db;

  static SnrCondition noiseless() { return {}; }
  static SnrCondition decibels(double v) { return {v}; }
  /// Accepts "noiseless" or a decibel number such as "25" or "25dB".
  static SnrCondition parse(const std::string& text);

  bool is_noiseless() const { return !db.has_value(); }
  std::string label() const;
  bool operator==(const SnrCondition&) const = default;
};

struct ProblemConfig {
  double frequency_hz = 110e6;
  int grid_nx = 32;
  int grid_ny = 32;
  double pixel_size_m = 0.15;
  int tx_count = 16;
  int rx_count = 32;
  double transceiver_radius_m = 4.0;
  int n_bim = 3;
  int n_lwb = 6;
  int n_bcg = 4;
  int n_pow = 5;
  double sbim_delta = 0.001;
  SnrCondition snr;

  int pixel_count() const { return grid_nx * grid_ny; }
  int measurement_count() const { return tx_count * rx_count; }
  double wavenumber() const { return 2.0 * kPi * frequency_hz / kSpeedOfLight; }
  double domain_width_m() const { return grid_nx * pixel_size_m; }
  double domain_height_m() const { return grid_ny * pixel_size_m; }

  /// Throws ConfigError on the first violated invariant.
  void validate() const;

  bool operator==(const ProblemConfig&) const = default;
};

ProblemConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ProblemConfig& config);
ProblemConfig load_config(const std::filesystem::path& path);
void save_config(const ProblemConfig& config, const std::filesystem::path& path);

/// Stable 64-bit FNV-1a digest of the canonical JSON form, as 16 hex digits.
std::string config_hash(const ProblemConfig& config);

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace bimlab
