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

#include "bimlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "bimlab/errors.hpp"
#include "json.hpp"

namespace bimlab {

using nlohmann::json;

SnrCondition SnrCondition::parse(const std::string& text) {
  if (text == "noiseless" || text == "inf") return noiseless();
  std::string body = text;
  if (body.size() > 2 && (body.ends_with("dB") || body.ends_with("db"))) body.resize(body.size() - 2);
  try {
    std::size_t used = 0;
    const double v = std::stod(body, &used);
    if (used != body.size() || !std::isfinite(v)) throw ConfigError("bad SNR value '" + text + "'");
    return decibels(v);
  } catch (const std::logic_error&) {
    throw ConfigError("bad SNR value '" + text + "'");
  }
}

std::string SnrCondition::label() const {
  if (!db) return "noiseless";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%gdB", *db);
  return buf;
}

void ProblemConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (!(frequency_hz > 0) || !std::isfinite(frequency_hz)) fail("frequency_hz must be positive");
  if (grid_nx <= 0 || grid_ny <= 0) fail("grid_nx and grid_ny must be positive");
  if (!(pixel_size_m > 0) || !std::isfinite(pixel_size_m)) fail("pixel_size_m must be positive");
  if (tx_count <= 0 || rx_count <= 0) fail("tx_count and rx_count must be positive");
  const double half_diag = 0.5 * std::hypot(domain_width_m(), domain_height_m());
  if (!(transceiver_radius_m > half_diag))
    fail("transceiver_radius_m must exceed half the grid diagonal (" + std::to_string(half_diag) + " m)");
  if (n_bim < 1 || n_lwb < 1 || n_bcg < 1 || n_pow < 1) fail("iteration counts must be >= 1");
  if (!(sbim_delta >= 0) || !std::isfinite(sbim_delta)) fail("sbim_delta must be nonnegative");
}

namespace {

json to_json(const ProblemConfig& c) {
  json j;
  j["frequency_hz"] = c.frequency_hz;
  j["grid_nx"] = c.grid_nx;
  j["grid_ny"] = c.grid_ny;
  j["pixel_size_m"] = c.pixel_size_m;
  j["tx_count"] = c.tx_count;
  j["rx_count"] = c.rx_count;
  j["transceiver_radius_m"] = c.transceiver_radius_m;
  j["n_bim"] = c.n_bim;
  j["n_lwb"] = c.n_lwb;
  j["n_bcg"] = c.n_bcg;
  j["n_pow"] = c.n_pow;
  j["sbim_delta"] = c.sbim_delta;
  if (c.snr.is_noiseless())
    j["snr_db"] = "noiseless";
  else
    j["snr_db"] = *c.snr.db;
  return j;
}

template <class T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

ProblemConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("top level must be an object");

  static const std::set<std::string> known = {
      "frequency_hz", "grid_nx", "grid_ny", "pixel_size_m", "tx_count", "rx_count", "transceiver_radius_m",
      "n_bim",        "n_lwb",   "n_bcg",   "n_pow",        "sbim_delta", "snr_db"};
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw ConfigError("unknown key '" + key + "'");

  // Integer fields must be integral in the file, not silently truncated floats.
  for (const char* key : {"grid_nx", "grid_ny", "tx_count", "rx_count", "n_bim", "n_lwb", "n_bcg", "n_pow"})
    if (j.contains(key) && !j.at(key).is_number_integer())
      throw ConfigError(std::string("field '") + key + "' must be an integer");

  ProblemConfig c;
  read_field(j, "frequency_hz", c.frequency_hz);
  read_field(j, "grid_nx", c.grid_nx);
  read_field(j, "grid_ny", c.grid_ny);
  read_field(j, "pixel_size_m", c.pixel_size_m);
  read_field(j, "tx_count", c.tx_count);
  read_field(j, "rx_count", c.rx_count);
  read_field(j, "transceiver_radius_m", c.transceiver_radius_m);
  read_field(j, "n_bim", c.n_bim);
  read_field(j, "n_lwb", c.n_lwb);
  read_field(j, "n_bcg", c.n_bcg);
  read_field(j, "n_pow", c.n_pow);
  read_field(j, "sbim_delta", c.sbim_delta);
  if (j.contains("snr_db")) {
    const auto& s = j.at("snr_db");
    if (s.is_string())
      c.snr = SnrCondition::parse(s.get<std::string>());
    else if (s.is_number())
      c.snr = SnrCondition::decibels(s.get<double>());
    else
      throw ConfigError("field 'snr_db' must be a number or \"noiseless\"");
  }
  c.validate();
  return c;
}

std::string config_to_json_text(const ProblemConfig& config) { return to_json(config).dump(2); }

ProblemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

void save_config(const ProblemConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config file " + path.string());
  out << config_to_json_text(config) << '\n';
}

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const ProblemConfig& config) {
  const std::string canon = to_json(config).dump();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canon.data(), canon.size())));
  return buf;
}

}  // namespace bimlab
