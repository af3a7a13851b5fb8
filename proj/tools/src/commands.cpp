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

#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "bimlab/bim.hpp"
#include "bimlab/config.hpp"
#include "bimlab/dataset.hpp"
#include "bimlab/errors.hpp"
#include "bimlab/metrics.hpp"
#include "bimlab/nn/unet.hpp"
#include "bimlab/tensor_io.hpp"
#include "json.hpp"

namespace bimlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) {
  try {
    return json::parse(read_text(p));
  } catch (const json::parse_error& e) {
    throw LoadError(LoadErrorKind::malformed, "malformed JSON in " + p.string() + ": " + e.what());
  }
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("write failed on " + p.string());
}

ProblemConfig config_or_default(const std::string& path) {
  return path.empty() ? ProblemConfig{} : load_config(path);
}

std::vector<SnrCondition> parse_conditions(const std::vector<std::string>& texts) {
  std::vector<SnrCondition> out;
  for (const auto& t : texts) out.push_back(SnrCondition::parse(t));
  if (out.empty()) out.push_back(SnrCondition::noiseless());
  return out;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int train = data::SplitSizes{}.train;
  int valid = data::SplitSizes{}.valid;
  int test = data::SplitSizes{}.test;
  std::optional<double> r_min;
  std::optional<double> r_max;
  int jobs = 1;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const ProblemConfig cfg = config_or_default(a.config);
  cfg.validate();
  auto params = data::SceneParams::from_config(cfg);
  if (a.r_min) params.r_min_m = *a.r_min;
  if (a.r_max) params.r_max_m = *a.r_max;
  params.validate();
  require(a.train >= 0 && a.valid >= 0 && a.test >= 0, "split sizes must be non-negative");

  const fs::path root(a.out);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create " + root.string() + ": " + ec.message());
  save_config(cfg, root / "config.json");

  const auto model = em::ForwardModel::build(cfg);
  const int jobs = effective_jobs(a.jobs);
  for (auto [split, count] : {std::pair{data::Split::train, a.train}, std::pair{data::Split::valid, a.valid},
                              std::pair{data::Split::test, a.test}}) {
    const auto t0 = Clock::now();
    out << "generating " << data::to_string(split) << ": " << count << " examples" << std::endl;
    const auto s = data::generate_split(model, params, split, count, a.seed, jobs);
    data::save_split(s, cfg, params, root);
    out << "  wrote " << (root / data::to_string(split) / "manifest.json").string() << " (" << std::fixed
        << std::setprecision(1) << seconds_since(t0) << " s)" << std::defaultfloat << std::endl;
  }
  return kOk;
}

// ---------------------------------------------------------------- forward

struct ForwardArgs {
  std::string config;
  std::string scene;
  std::string snr = "noiseless";
  std::uint64_t seed = 0;
  std::string out;
};

data::SceneSpec scene_from_json(const json& j) {
  data::SceneSpec s;
  try {
    for (const auto& c : j.at("cylinders"))
      s.cylinders.push_back({c.at("center_x").get<double>(), c.at("center_y").get<double>(),
                             c.at("radius").get<double>(), c.at("contrast").get<double>()});
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scene: ") + e.what());
  }
  return s;
}

int cmd_forward(const ForwardArgs& a, std::ostream& out) {
  const ProblemConfig cfg = config_or_default(a.config);
  cfg.validate();
  const auto scene = scene_from_json(read_json(a.scene));
  const auto snr = SnrCondition::parse(a.snr);
  const auto model = em::ForwardModel::build(cfg);
  const ContrastImage t = data::rasterize(scene, cfg);
  const auto clean = em::forward_solve(model, t);
  const auto mea = em::add_noise(clean, snr, a.seed);

  const fs::path dir(a.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  io::PayloadWriter w(dir, "fields.bin");
  const CVector tv = t.t, mv = mea.data;
  w.add("contrast", {cfg.grid_ny, cfg.grid_nx}, std::span<const cplx>(tv.data(), std::size_t(tv.size())));
  w.add("measurement", {cfg.tx_count, cfg.rx_count}, std::span<const cplx>(mv.data(), std::size_t(mv.size())));
  io::Manifest m;
  m.tensors = w.finish();
  m.extra = json{{"format", "bimlab-forward"},
                 {"config_hash", config_hash(cfg)},
                 {"snr", snr.label()},
                 {"seed", a.seed}}
                .dump();
  io::write_manifest(dir / "manifest.json", m);
  out << "wrote " << (dir / "manifest.json").string();
  if (!snr.is_noiseless()) out << " (empirical SNR " << em::empirical_snr_db(clean, mea) << " dB)";
  out << '\n';
  return kOk;
}

// ---------------------------------------------------------------- reconstruct

struct ReconstructArgs {
  std::string method;
  std::string dataset;
  std::string split = "test";
  std::vector<std::string> snr;
  std::string weights;
  int examples = -1;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out;
};

using WeightList = std::vector<std::shared_ptr<const nn::UNetWeights>>;

// A per-condition subdirectory named by the SNR label takes precedence over the root set.
WeightList load_tbim_weights(const fs::path& root, const SnrCondition& snr, int n_bim) {
  const fs::path dir = fs::exists(root / snr.label() / "meta.json") ? root / snr.label() : root;
  WeightList out;
  for (auto& w : nn::load_weight_set(dir, n_bim)) out.push_back(std::make_shared<const nn::UNetWeights>(std::move(w)));
  return out;
}

int cmd_reconstruct(const ReconstructArgs& a, std::ostream& out) {
  if (a.method != "sbim" && a.method != "tbim" && a.method != "landweber-bim")
    throw ConfigError("unknown method '" + a.method + "'");
  if (a.method == "tbim" && a.weights.empty()) throw ConfigError("tbim needs --weights");

  const fs::path droot(a.dataset);
  const ProblemConfig cfg = data::load_dataset_config(droot);
  const auto split = data::load_split(droot, data::split_from_string(a.split));
  if (split.config_hash != config_hash(cfg))
    throw ConfigError("split config hash " + split.config_hash + " does not match dataset config " +
                      config_hash(cfg));
  const auto conditions = parse_conditions(a.snr);
  const std::size_t n = a.examples < 0 ? split.size() : std::min(split.size(), std::size_t(a.examples));
  require(n > 0, "no examples selected");

  const auto model = em::ForwardModel::build(cfg);
  const int jobs = effective_jobs(a.jobs);
  const fs::path root(a.out);

  json report_conditions = json::array();
  json timing_conditions = json::array();
  json table_rows = json::array();
  for (const auto& snr : conditions) {
    WeightList weights;
    if (a.method == "tbim") weights = load_tbim_weights(a.weights, snr, cfg.n_bim);

    std::vector<double> final_rne(n);
    std::vector<std::vector<double>> step_rne(n);
    std::vector<double> wall(n);
    std::vector<int> breakdown(n);
    data::parallel_for(int(n), jobs, [&](int i) {
      const auto k = std::size_t(i);
      const auto t0 = Clock::now();
      const std::uint64_t example_noise_seed = data::derive_seed(a.seed, k);
      const auto e = em::add_noise(split.measurements[k], snr, example_noise_seed);
      inverse::BimOptions opts;
      opts.power_seed = data::derive_seed(example_noise_seed, 1);
      inverse::ReconstructionResult r;
      if (a.method == "sbim")
        r = inverse::sbim(model, e, opts);
      else if (a.method == "tbim")
        r = inverse::tbim(model, e, weights, opts);
      else
        r = inverse::landweber_bim(model, e, opts);

      const auto& truth = split.contrasts[k].t;
      for (const auto& step : r.per_step) step_rne[k].push_back(rne(step.t, truth));
      final_rne[k] = rne(r.final.t, truth);
      breakdown[k] = r.state_breakdown ? 1 : 0;
      inverse::save_result(r, result_dir(root, snr.label(), k),
                           json{{"example", k}, {"snr", snr.label()}, {"noise_seed", example_noise_seed}}.dump());
      wall[k] = seconds_since(t0);
    });

    std::vector<double> mrne_steps;
    for (int s = 0; s < cfg.n_bim; ++s) {
      std::vector<double> col;
      for (std::size_t k = 0; k < n; ++k) col.push_back(step_rne[k][std::size_t(s)]);
      mrne_steps.push_back(mrne(col));
    }
    int breakdowns = 0;
    for (int b : breakdown) breakdowns += b;
    report_conditions.push_back({{"snr", snr.label()},
                                 {"rne", final_rne},
                                 {"rne_per_step", step_rne},
                                 {"mrne", mrne(final_rne)},
                                 {"state_breakdowns", breakdowns}});
    table_rows.push_back({{"snr", snr.label()}, {"mrne", mrne_steps}});
    timing_conditions.push_back({{"snr", snr.label()}, {"wall_seconds", wall}});
    out << a.method << " " << snr.label() << ": MRNE " << std::fixed << std::setprecision(2) << mrne(final_rne)
        << "% over " << n << " examples" << std::defaultfloat << '\n';
  }

  std::vector<int> columns;
  for (int i = 1; i <= cfg.n_bim; ++i) columns.push_back(i);
  const json report{{"format", "bimlab-report"},
                    {"method", a.method},
                    {"split", a.split},
                    {"config_hash", config_hash(cfg)},
                    {"seed", a.seed},
                    {"examples", n},
                    {"n_bim", cfg.n_bim},
                    {"conditions", report_conditions},
                    {"mrne_table", {{"columns", columns}, {"rows", table_rows}}}};
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create " + root.string() + ": " + ec.message());
  write_text(root / "report.json", report.dump(2) + "\n");
  write_text(root / "timing.json", json{{"conditions", timing_conditions}}.dump(2) + "\n");
  out << "wrote " << (root / "report.json").string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string results;
  std::string dataset;
};

std::string text_table(const json& rows, int n_bim) {
  std::ostringstream os;
  os << std::left << std::setw(12) << "SNR";
  for (int i = 1; i <= n_bim; ++i) os << std::right << std::setw(10) << ("i=" + std::to_string(i));
  os << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(12) << r.at("snr").get<std::string>();
    for (double v : r.at("mrne").get<std::vector<double>>()) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(2) << v << '%';
      os << std::right << std::setw(10) << cell.str();
    }
    os << '\n';
  }
  return os.str();
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const fs::path rroot(a.results), droot(a.dataset);
  const json report = read_json(rroot / "report.json");
  const ProblemConfig cfg = data::load_dataset_config(droot);
  std::string hash, split_name;
  std::size_t n = 0;
  std::vector<std::string> labels;
  try {
    hash = report.at("config_hash").get<std::string>();
    split_name = report.at("split").get<std::string>();
    n = report.at("examples").get<std::size_t>();
    for (const auto& c : report.at("conditions")) labels.push_back(c.at("snr").get<std::string>());
  } catch (const json::exception& e) {
    throw LoadError(LoadErrorKind::malformed, std::string("malformed report: ") + e.what());
  }
  if (hash != config_hash(cfg))
    throw ConfigError("config hash mismatch: results " + hash + ", dataset " + config_hash(cfg));
  const auto split = data::load_split(droot, data::split_from_string(split_name));
  if (split.config_hash != hash) throw ConfigError("config hash mismatch between results and split");
  if (split.size() < n) throw ConfigError("dataset split has fewer examples than the results");

  json rows = json::array();
  json conditions = json::array();
  for (const auto& label : labels) {
    std::vector<std::vector<double>> per_step(std::size_t(cfg.n_bim));
    std::vector<double> final_rne;
    for (std::size_t k = 0; k < n; ++k) {
      const auto r = inverse::load_result(result_dir(rroot, label, k));
      require(int(r.per_step.size()) == cfg.n_bim, "stored result has the wrong step count");
      const auto& truth = split.contrasts[k].t;
      for (std::size_t s = 0; s < per_step.size(); ++s) per_step[s].push_back(rne(r.per_step[s].t, truth));
      final_rne.push_back(rne(r.final.t, truth));
    }
    std::vector<double> mrne_steps;
    for (const auto& col : per_step) mrne_steps.push_back(mrne(col));
    rows.push_back({{"snr", label}, {"mrne", mrne_steps}});
    conditions.push_back({{"snr", label}, {"rne", final_rne}, {"mrne", mrne(final_rne)}});
  }

  std::vector<int> columns;
  for (int i = 1; i <= cfg.n_bim; ++i) columns.push_back(i);
  const json eval{{"format", "bimlab-evaluation"},
                  {"config_hash", hash},
                  {"split", split_name},
                  {"examples", n},
                  {"conditions", conditions},
                  {"mrne_table", {{"columns", columns}, {"rows", rows}}}};
  const std::string table = text_table(rows, cfg.n_bim);
  write_text(rroot / "evaluation.json", eval.dump(2) + "\n");
  write_text(rroot / "evaluation.txt", table);
  out << table;
  return kOk;
}

// ---------------------------------------------------------------- parity-check

struct ParityArgs {
  std::string weights;
  std::string vectors;
  double tolerance = 1e-4;
};

int cmd_parity(const ParityArgs& a, std::ostream& out) {
  const auto w = nn::load_weights(a.weights);
  const auto pv = nn::load_parity_vectors(a.vectors);
  const double err = nn::parity_max_relative_error(w, pv);
  const bool ok = err < a.tolerance;
  out << (ok ? "PASS" : "FAIL") << " parity: " << pv.inputs.size() << " pairs, max relative error " << err
      << " (tolerance " << a.tolerance << ")\n";
  return ok ? kOk : kNumerical;
}

}  // namespace

fs::path result_dir(const fs::path& results_root, const std::string& snr_label, std::size_t index) {
  char name[32];
  std::snprintf(name, sizeof name, "%05zu", index);
  return results_root / snr_label / name;
}

int effective_jobs(int fallback) {
  if (const char* env = std::getenv("BIMLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return int(v);
  }
  return std::max(1, fallback);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"bimlab: Born iterative microwave imaging toolkit"};
  app.require_subcommand(1);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Simulate a dataset (train, valid, test splits)");
  gen->add_option("--config", ga.config, "Problem configuration JSON (defaults when omitted)");
  gen->add_option("--out", ga.out, "Dataset root directory")->required();
  gen->add_option("--seed", ga.seed, "Base seed");
  gen->add_option("--train", ga.train, "Training examples");
  gen->add_option("--valid", ga.valid, "Validation examples");
  gen->add_option("--test", ga.test, "Test examples");
  gen->add_option("--r-min", ga.r_min, "Smallest cylinder radius in meters");
  gen->add_option("--r-max", ga.r_max, "Largest cylinder radius in meters");
  gen->add_option("--jobs", ga.jobs, "Worker threads (BIMLAB_THREADS overrides)");

  ForwardArgs fa;
  auto* fwd = app.add_subcommand("forward", "Simulate measurements for one scene");
  fwd->add_option("--config", fa.config, "Problem configuration JSON");
  fwd->add_option("--scene", fa.scene, "Scene JSON with a cylinders list")->required();
  fwd->add_option("--snr", fa.snr, "noiseless or a value in dB");
  fwd->add_option("--seed", fa.seed, "Noise seed");
  fwd->add_option("--out", fa.out, "Output directory")->required();

  ReconstructArgs ra;
  auto* rec = app.add_subcommand("reconstruct", "Reconstruct a dataset split");
  rec->add_option("--method", ra.method, "sbim, tbim or landweber-bim")->required();
  rec->add_option("--dataset", ra.dataset, "Dataset root")->required();
  rec->add_option("--split", ra.split, "train, valid or test");
  rec->add_option("--snr", ra.snr, "SNR conditions, e.g. noiseless,25,15")->delimiter(',');
  rec->add_option("--weights", ra.weights, "Weight set directory (tbim)");
  rec->add_option("--examples", ra.examples, "Use only the first k examples");
  rec->add_option("--seed", ra.seed, "Noise seed");
  rec->add_option("--jobs", ra.jobs, "Worker threads (BIMLAB_THREADS overrides)");
  rec->add_option("--out", ra.out, "Results directory")->required();

  EvaluateArgs ea;
  auto* ev = app.add_subcommand("evaluate", "Recompute RNE and MRNE from stored results");
  ev->add_option("--results", ea.results, "Results directory")->required();
  ev->add_option("--dataset", ea.dataset, "Dataset root")->required();

  ParityArgs pa;
  auto* par = app.add_subcommand("parity-check", "Compare unet_forward with stored reference vectors");
  par->add_option("--weights", pa.weights, "Weight bundle directory")->required();
  par->add_option("--vectors", pa.vectors, "Parity vector directory")->required();
  par->add_option("--tolerance", pa.tolerance, "Largest accepted relative error");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageOrConfig;
  }

  try {
    if (*gen) return cmd_generate(ga, out);
    if (*fwd) return cmd_forward(fa, out);
    if (*rec) return cmd_reconstruct(ra, out);
    if (*ev) return cmd_evaluate(ea, out);
    if (*par) return cmd_parity(pa, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageOrConfig;
  } catch (const ContractError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageOrConfig;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kNumerical;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsageOrConfig;
}

}  // namespace bimlab::cli
