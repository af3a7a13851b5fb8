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
#include "bimlab/errors.hpp"
#include "doctest.h"
#include "support/tempdir.hpp"

using namespace bimlab;

TEST_CASE("defaults describe the desk-scale setup and validate") {
  ProblemConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.pixel_count() == 1024);
  CHECK(c.measurement_count() == 512);
  CHECK(c.n_bim == 3);
  CHECK(c.n_lwb == 6);
  CHECK(c.n_bcg == 4);
  CHECK(c.n_pow == 5);
  CHECK(c.sbim_delta == 0.001);
}

TEST_CASE("JSON round trip") {
  ProblemConfig c;
  c.grid_nx = 16;
  c.snr = SnrCondition::decibels(15);
  const auto back = config_from_json_text(config_to_json_text(c));
  CHECK(back == c);
  testing::TempDir dir("config");
  save_config(c, dir / "c.json");
  CHECK(load_config(dir / "c.json") == c);
}

TEST_CASE("config file errors") {
  CHECK_THROWS_AS(config_from_json_text(R"({"grid_nx": 8, "bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"grid_nx": 8.5})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"transceiver_radius_m": 3.0})"), ConfigError);  // inside the grid
  CHECK_THROWS_AS(config_from_json_text(R"({"n_lwb": 0})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"frequency_hz": -1})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"snr_db": "loud"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text("[1,2]"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text("{"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/bimlab.json"), IoError);
}

TEST_CASE("SNR parsing and labels") {
  CHECK(SnrCondition::parse("noiseless").is_noiseless());
  CHECK(*SnrCondition::parse("25").db == 25.0);
  CHECK(*SnrCondition::parse("10dB").db == 10.0);
  CHECK(SnrCondition::parse("15").label() == "15dB");
  CHECK(SnrCondition::noiseless().label() == "noiseless");
  CHECK_THROWS_AS(SnrCondition::parse("12x"), ConfigError);
}

TEST_CASE("config hash is stable and sensitive") {
  ProblemConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.pixel_size_m = 0.1500001;
  CHECK(config_hash(a) != config_hash(b));
}
