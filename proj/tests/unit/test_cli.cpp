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

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "bimlab/bim.hpp"
#include "bimlab/config.hpp"
#include "bimlab/dataset.hpp"
#include "commands.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support/tempdir.hpp"

using namespace bimlab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProblemConfig small_config() {
  ProblemConfig c;
  c.grid_nx = 16;
  c.grid_ny = 16;
  c.pixel_size_m = 0.3;
  c.tx_count = 8;
  c.rx_count = 16;
  return c;
}

// One small dataset shared by the tests in this file.
struct Fixture {
  testing::TempDir dir{"cli"};
  fs::path config = dir / "config.json";
  fs::path data = dir / "data";

  Fixture() {
    save_config(small_config(), config);
    const auto r = invoke({"generate", "--config", config.string(), "--out", data.string(), "--train", "1", "--valid",
                           "1", "--test", "8", "--seed", "5"});
    REQUIRE(r.code == 0);
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void write_results(const fs::path& root, const std::vector<ContrastImage>& images, const std::string& hash) {
  for (std::size_t k = 0; k < images.size(); ++k) {
    inverse::ReconstructionResult r;
    r.final = images[k];
    r.per_step = {images[k], images[k], images[k]};
    r.gammas = r.sigmas = r.misfits = {1.0, 1.0, 1.0};
    inverse::save_result(r, cli::result_dir(root, "noiseless", k));
  }
  const json report{{"config_hash", hash},
                    {"split", "test"},
                    {"examples", images.size()},
                    {"conditions", json::array({{{"snr", "noiseless"}}})}};
  std::ofstream(root / "report.json") << report.dump();
}

}  // namespace

TEST_CASE("generate writes complete, reproducible splits") {
  auto& f = fixture();
  for (const char* s : {"train", "valid", "test"}) CHECK(fs::exists(f.data / s / "manifest.json"));
  const auto again = f.dir / "again";
  REQUIRE(invoke({"generate", "--config", f.config.string(), "--out", again.string(), "--train", "1", "--valid", "1",
                  "--test", "8", "--seed", "5"})
              .code == 0);
  CHECK(slurp(again / "test" / "manifest.json") == slurp(f.data / "test" / "manifest.json"));
  CHECK(slurp(again / "test" / "measurements.bin") == slurp(f.data / "test" / "measurements.bin"));
}

TEST_CASE("generate rejects an impossible radius range") {
  auto& f = fixture();
  const auto r = invoke({"generate", "--config", f.config.string(), "--out", (f.dir / "bad").string(), "--r-min",
                         "10", "--r-max", "12"});
  CHECK(r.code == 1);
  CHECK(r.err.find("config error") != std::string::npos);
}

TEST_CASE("usage errors and help") {
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"frobnicate"}).code == 1);
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"reconstruct", "--method", "sbim"}).code == 1);
}

TEST_CASE("sbim reconstruct produces a deterministic report") {
  auto& f = fixture();
  const auto out1 = f.dir / "sbim1", out2 = f.dir / "sbim2";
  const std::vector<std::string> base{"reconstruct", "--method", "sbim", "--dataset", f.data.string(), "--examples",
                                      "7", "--snr", "noiseless,20"};
  auto a1 = base, a2 = base;
  a1.insert(a1.end(), {"--out", out1.string()});
  a2.insert(a2.end(), {"--out", out2.string(), "--jobs", "2"});
  REQUIRE(invoke(a1).code == 0);
  REQUIRE(invoke(a2).code == 0);
  CHECK(slurp(out1 / "report.json") == slurp(out2 / "report.json"));
  CHECK(fs::exists(out1 / "timing.json"));

  const json report = json::parse(slurp(out1 / "report.json"));
  REQUIRE(report["conditions"].size() == 2);
  const auto rnes = report["conditions"][0]["rne"].get<std::vector<double>>();
  CHECK(rnes.size() == 7);
  for (double v : rnes) CHECK(v >= 0.0);
  CHECK(report["mrne_table"]["rows"][1]["mrne"].size() == 3);
  CHECK(report["conditions"][1]["snr"] == "20dB");

  // evaluate reproduces the stored per-example RNEs.
  REQUIRE(invoke({"evaluate", "--results", out1.string(), "--dataset", f.data.string()}).code == 0);
  const json eval = json::parse(slurp(out1 / "evaluation.json"));
  const auto eval_rnes = eval["conditions"][0]["rne"].get<std::vector<double>>();
  REQUIRE(eval_rnes.size() == 7);
  for (std::size_t k = 0; k < 7; ++k) CHECK(eval_rnes[k] == doctest::Approx(rnes[k]).epsilon(1e-6));
  const double mean = std::accumulate(eval_rnes.begin(), eval_rnes.end(), 0.0) / 7.0;
  CHECK(std::abs(eval["conditions"][0]["mrne"].get<double>() - mean) < 1e-12);
}

TEST_CASE("tbim needs weights") {
  auto& f = fixture();
  const auto base = std::vector<std::string>{"reconstruct", "--method", "tbim", "--dataset", f.data.string(),
                                             "--examples", "1", "--out", (f.dir / "tbim").string()};
  CHECK(invoke(base).code == 1);
  auto missing = base;
  missing.insert(missing.end(), {"--weights", (f.dir / "no_weights").string()});
  CHECK(invoke(missing).code == 2);
}

TEST_CASE("evaluate on synthetic results") {
  auto& f = fixture();
  const auto split = data::load_split(f.data, data::Split::test);
  const std::string hash = config_hash(small_config());

  const auto perfect = f.dir / "perfect";
  write_results(perfect, {split.contrasts[0], split.contrasts[1]}, hash);
  REQUIRE(invoke({"evaluate", "--results", perfect.string(), "--dataset", f.data.string()}).code == 0);
  json eval = json::parse(slurp(perfect / "evaluation.json"));
  for (double v : eval["mrne_table"]["rows"][0]["mrne"].get<std::vector<double>>()) CHECK(v == 0.0);

  const auto zeros = f.dir / "zeros";
  write_results(zeros, {ContrastImage::zeros(16, 16), ContrastImage::zeros(16, 16)}, hash);
  REQUIRE(invoke({"evaluate", "--results", zeros.string(), "--dataset", f.data.string()}).code == 0);
  eval = json::parse(slurp(zeros / "evaluation.json"));
  for (double v : eval["mrne_table"]["rows"][0]["mrne"].get<std::vector<double>>()) CHECK(v == doctest::Approx(100.0));
  CHECK(slurp(zeros / "evaluation.txt").find("100.00%") != std::string::npos);

  const auto wrong = f.dir / "wrong";
  write_results(wrong, {split.contrasts[0]}, "0000000000000000");
  const auto r = invoke({"evaluate", "--results", wrong.string(), "--dataset", f.data.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("hash mismatch") != std::string::npos);
}

TEST_CASE("forward writes one measurement") {
  auto& f = fixture();
  const auto scene = f.dir / "scene.json";
  std::ofstream(scene) << R"({"cylinders": [{"center_x": 0.3, "center_y": -0.6, "radius": 0.9, "contrast": 0.5}]})";
  const auto out = f.dir / "fwd";
  const auto r = invoke({"forward", "--config", f.config.string(), "--scene", scene.string(), "--snr", "25", "--out",
                         out.string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(r.out.find("empirical SNR") != std::string::npos);
}

TEST_CASE("parity-check on the checked-in vectors") {
  const fs::path root = fs::path(BIMLAB_TEST_DATA_DIR) / "parity";
  const auto r = invoke({"parity-check", "--weights", (root / "weights").string(), "--vectors",
                         (root / "vectors").string()});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("PASS", 0) == 0);
}

TEST_CASE("BIMLAB_THREADS overrides the job count") {
  setenv("BIMLAB_THREADS", "3", 1);
  CHECK(cli::effective_jobs(1) == 3);
  setenv("BIMLAB_THREADS", "zero", 1);
  CHECK(cli::effective_jobs(2) == 2);
  unsetenv("BIMLAB_THREADS");
  CHECK(cli::effective_jobs(0) == 1);
}
