// Command-line front end: gen / train / eval / probe / bench.
//
// Exit codes: 0 success, 2 config error, 3 I/O error, 4 computational cap.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "declearn/serialization.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace declearn;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& config, std::uint64_t seed,
                    const std::vector<std::string>& artifacts,
                    const std::string& started) {
  json m{{"command", command}, {"config", config},   {"seed", seed},
         {"artifacts", artifacts}, {"version", kVersion},
         {"started", started},    {"finished", timestamp()}};
  write_text_file(out_dir / "manifest.json", m.dump(2) + "\n");
}

// Config-file values fill in options the command line left at default.
template <typename T>
void cfg_override(CLI::App* cmd, const json& cfg, const std::string& flag,
                  const std::string& key, T& dst) {
  if (cmd->count(flag) == 0 && cfg.contains(key)) dst = cfg.at(key).get<T>();
}

Loss parse_loss(const std::string& name) {
  if (name == "hamming") return Loss::Hamming;
  if (name == "zero-one") return Loss::ZeroOne;
  if (name == "perceptron") return Loss::Perceptron;
  throw ConfigError("unknown loss: " + name +
                    " (expected hamming, zero-one, or perceptron)");
}

struct LoadedData {
  OutputSpace space;
  ScoringModel model;
  Dataset train, validation, test;
  json meta;
};

LoadedData load_data_dir(const fs::path& dir) {
  json meta = read_json_file(dir / "meta.json");
  LoadedData d{space_from_json(read_json_file(dir / "space.json")),
               model_from_json(meta.at("model")),
               dataset_from_jsonl(read_text_file(dir / "train.jsonl")),
               dataset_from_jsonl(read_text_file(dir / "validation.jsonl")),
               dataset_from_jsonl(read_text_file(dir / "test.jsonl")),
               std::move(meta)};
  return d;
}

const Dataset& pick_split(const LoadedData& d, const std::string& split) {
  if (split == "train") return d.train;
  if (split == "validation") return d.validation;
  if (split == "test") return d.test;
  throw ConfigError("unknown split: " + split);
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Decomposed-learning toolkit for constrained structured prediction"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string config_path;
  int threads = 0;
  app.add_option("--seed", seed, "master random seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--config", config_path, "JSON config file (flags override it)");
  app.add_option("--threads", threads, "thread count for benchmark cells (0 = default)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic constrained dataset");
  SyntheticConfig sc;
  gen->add_option("--n", sc.n, "output variables");
  gen->add_option("--d", sc.d, "features per variable");
  gen->add_option("--constraints", sc.constraints, "random linear constraints");
  gen->add_option("--min-feasible", sc.min_feasible, "minimum feasible outputs");
  gen->add_option("--train-sizes", sc.train_sizes, "training-curve sizes");
  gen->add_option("--test-size", sc.test_size, "test instances");
  gen->add_option("--validation-size", sc.validation_size, "validation instances");
  gen->add_option("--min-margin", sc.min_margin,
                  "gold margin floor, in units of sqrt(d) (0 = off)");

  // train
  auto* train = app.add_subcommand("train", "train weights on a dataset");
  std::string data_dir, algo = "gl", loss_name = "hamming", schedule = "constant";
  int k = 2;
  TrainConfig tc;
  int sample_sets = 0;
  train->add_option("--data", data_dir, "dataset directory from gen")->required();
  train->add_option("--algo", algo, "ll | gl | decl-k | decl-spair");
  train->add_option("--k", k, "set size for decl-k");
  train->add_option("--loss", loss_name, "hamming | zero-one | perceptron");
  train->add_option("--epochs", tc.epochs, "training epochs");
  train->add_option("--eta", tc.eta0, "step size");
  train->add_option("--lambda", tc.lambda, "l2 shrinkage strength");
  train->add_option("--sample-sets", sample_sets, "sets sampled per step (0 = all)");
  train->add_flag("--averaging", tc.averaging, "also report averaged weights");
  train->add_option("--schedule", schedule, "constant | inverse");

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate weights on a split");
  std::string weights_path, constraints_mode = "on", split = "test";
  eval->add_option("--data", data_dir, "dataset directory")->required();
  eval->add_option("--weights", weights_path, "weights.json path")->required();
  eval->add_option("--constraints", constraints_mode, "on | off (LL+C vs LL)");
  eval->add_option("--split", split, "train | validation | test");

  // probe
  auto* probe = app.add_subcommand("probe", "exactness probe for a decomposition");
  std::string mode = "certificate", decomp = "decl-k";
  long probes = 200;
  int budget_epochs = 500;
  probe->add_option("--data", data_dir, "dataset directory")->required();
  probe->add_option("--mode", mode, "certificate | sampling");
  probe->add_option("--decomp", decomp, "decomposition family (decl-k)");
  probe->add_option("--k", k, "set size for decl-k");
  probe->add_option("--probes", probes, "random restarts for sampling mode");
  probe->add_option("--loss", loss_name, "loss for the certificate");
  probe->add_option("--budget-epochs", budget_epochs, "epoch budget per sampling probe");

  // bench
  auto* bench = app.add_subcommand("bench", "learning-curve benchmark, CSV output");
  BenchmarkConfig bc;
  bench->add_option("--n", bc.data.n, "output variables");
  bench->add_option("--d", bc.data.d, "features per variable");
  bench->add_option("--constraints", bc.data.constraints, "random linear constraints");
  bench->add_option("--train-sizes", bc.data.train_sizes, "training-curve sizes");
  bench->add_option("--test-size", bc.data.test_size, "test instances");
  bench->add_option("--validation-size", bc.data.validation_size,
                    "validation instances");
  bench->add_option("--min-feasible", bc.data.min_feasible,
                    "minimum feasible outputs");
  bench->add_option("--min-margin", bc.data.min_margin,
                    "gold margin floor, in units of sqrt(d) (0 = off)");
  bench->add_option("--trials", bc.data.trials, "independent trials");
  bench->add_option("--epochs", bc.epochs, "training epochs");
  bench->add_option("--eta", bc.eta0, "step size");
  bench->add_flag("--tune-lambda", bc.tune_lambda, "grid-search l2 on validation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  json cfg;
  if (!config_path.empty()) cfg = read_json_file(config_path);
  cfg_override(&app, cfg, "--seed", "seed", seed);
  cfg_override(&app, cfg, "--out", "out", out_dir);
  cfg_override(&app, cfg, "--threads", "threads", threads);

  fs::path out(out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory " + out.string());
  std::string started = timestamp();

  if (*gen) {
    cfg_override(gen, cfg, "--n", "n", sc.n);
    cfg_override(gen, cfg, "--d", "d", sc.d);
    cfg_override(gen, cfg, "--constraints", "constraints", sc.constraints);
    cfg_override(gen, cfg, "--min-feasible", "min_feasible", sc.min_feasible);
    cfg_override(gen, cfg, "--train-sizes", "train_sizes", sc.train_sizes);
    cfg_override(gen, cfg, "--test-size", "test_size", sc.test_size);
    cfg_override(gen, cfg, "--validation-size", "validation_size", sc.validation_size);
    cfg_override(gen, cfg, "--min-margin", "min_margin", sc.min_margin);
    sc.check();
    SyntheticData data = gen_synthetic(sc, sub_seed(seed, "data"));
    write_text_file(out / "train.jsonl", dataset_to_jsonl(data.train));
    write_text_file(out / "validation.jsonl", dataset_to_jsonl(data.validation));
    write_text_file(out / "test.jsonl", dataset_to_jsonl(data.test));
    write_text_file(out / "space.json", space_to_json(data.space).dump(2) + "\n");
    json meta{{"seed", seed},
              {"model", model_to_json(data.model)},
              {"true_weights", weights_to_json(data.true_weights)}};
    write_text_file(out / "meta.json", meta.dump(2) + "\n");
    json rc{{"n", sc.n},
            {"d", sc.d},
            {"constraints", sc.constraints},
            {"min_feasible", sc.min_feasible},
            {"train_sizes", sc.train_sizes},
            {"test_size", sc.test_size},
            {"validation_size", sc.validation_size},
            {"min_margin", sc.min_margin}};
    write_manifest(out, "gen", rc, seed,
                   {"train.jsonl", "validation.jsonl", "test.jsonl",
                    "space.json", "meta.json"},
                   started);
    std::cout << "wrote dataset to " << out.string() << "\n";
    return 0;
  }

  if (*train) {
    cfg_override(train, cfg, "--algo", "algo", algo);
    cfg_override(train, cfg, "--k", "k", k);
    cfg_override(train, cfg, "--loss", "loss", loss_name);
    cfg_override(train, cfg, "--epochs", "epochs", tc.epochs);
    cfg_override(train, cfg, "--eta", "eta", tc.eta0);
    cfg_override(train, cfg, "--lambda", "lambda", tc.lambda);
    cfg_override(train, cfg, "--sample-sets", "sample_sets", sample_sets);
    cfg_override(train, cfg, "--schedule", "schedule", schedule);
    Loss loss = parse_loss(loss_name);
    if (schedule == "constant")
      tc.schedule = StepSchedule::Constant;
    else if (schedule == "inverse")
      tc.schedule = StepSchedule::Inverse;
    else
      throw ConfigError("unknown schedule: " + schedule);
    tc.seed = sub_seed(seed, "shuffle");
    if (sample_sets > 0) tc.sample_sets = sample_sets;
    tc.check();
    if (algo != "ll" && algo != "gl" && algo != "decl-k" && algo != "decl-spair")
      throw ConfigError("unknown algorithm: " + algo +
                        " (expected ll, gl, decl-k, or decl-spair)");

    LoadedData d = load_data_dir(data_dir);
    TrainReport report;
    if (algo == "ll") {
      report = train_local(d.model, d.train, d.space, tc);
    } else {
      std::vector<Decomposition> S_list;
      if (algo == "gl") {
        S_list = {full_set(d.model.n)};
      } else if (algo == "decl-k") {
        if (k < 1 || k > d.model.n)
          throw ConfigError("k = " + std::to_string(k) +
                            " out of range for decl-k (need 1 <= k <= " +
                            std::to_string(d.model.n) + ")");
        S_list = {decl_k(d.model.n, k)};
      } else if (algo == "decl-spair") {
        if (d.model.family == ModelFamily::SingletonLinear)
          throw ConfigError(
              "decl-spair requires a pairwise model: its sets are connected "
              "components of edges whose potentials agree with the gold "
              "labels, and a singleton model has no edges");
        for (const auto& inst : d.train)
          S_list.push_back(s_pair_blocks(inst.gold));
      } else {
        throw ConfigError("unknown algorithm: " + algo +
                          " (expected ll, gl, decl-k, or decl-spair)");
      }
      report = train_subgradient(d.model, d.train, S_list, d.space, loss, tc);
      if (algo == "gl") {
        double dec = decl_objective(d.model, report.weights, d.train, S_list,
                                    d.space, loss);
        double glob =
            global_objective(d.model, report.weights, d.train, d.space, loss);
        if (dec != glob)
          throw Error("gl invariant violated: full-set decomposed objective " +
                      std::to_string(dec) + " != global " + std::to_string(glob));
      }
    }
    json w{{"weights", report.weights}};
    if (report.averaged) w["averaged"] = *report.averaged;
    write_text_file(out / "weights.json", w.dump() + "\n");
    write_text_file(out / "report.json", report_to_json(report).dump(2) + "\n");
    json rc{{"data", data_dir},   {"algo", algo},
            {"k", k},             {"loss", loss_name},
            {"epochs", tc.epochs},{"eta", tc.eta0},
            {"lambda", tc.lambda},{"sample_sets", sample_sets},
            {"schedule", schedule}};
    write_manifest(out, "train", rc, seed, {"weights.json", "report.json"},
                   started);
    std::cout << "epochs " << report.epochs_run << ", updates " << report.updates
              << ", final decl objective "
              << (report.decl_objective_trace.empty()
                      ? 0.0
                      : report.decl_objective_trace.back())
              << "\n";
    return 0;
  }

  if (*eval) {
    cfg_override(eval, cfg, "--constraints", "constraints", constraints_mode);
    cfg_override(eval, cfg, "--split", "split", split);
    if (constraints_mode != "on" && constraints_mode != "off")
      throw ConfigError("--constraints must be on or off, got " + constraints_mode);
    LoadedData d = load_data_dir(data_dir);
    json wj = read_json_file(weights_path);
    WeightVector w = weights_from_json(wj.contains("weights") ? wj.at("weights") : wj);
    Metrics m = evaluate(d.model, w, pick_split(d, split), d.space,
                         constraints_mode == "on");
    json mj = metrics_to_json(m);
    write_text_file(out / "metrics.json", mj.dump(2) + "\n");
    json rc{{"data", data_dir},
            {"weights", weights_path},
            {"constraints", constraints_mode},
            {"split", split}};
    write_manifest(out, "eval", rc, seed, {"metrics.json"}, started);
    std::cout << mj.dump(2) << "\n";
    return 0;
  }

  if (*probe) {
    cfg_override(probe, cfg, "--mode", "mode", mode);
    cfg_override(probe, cfg, "--decomp", "decomp", decomp);
    cfg_override(probe, cfg, "--k", "k", k);
    cfg_override(probe, cfg, "--probes", "probes", probes);
    cfg_override(probe, cfg, "--loss", "loss", loss_name);
    if (decomp != "decl-k")
      throw ConfigError("unknown decomposition family: " + decomp);
    LoadedData d = load_data_dir(data_dir);
    if (k < 1 || k > d.model.n)
      throw ConfigError("k = " + std::to_string(k) + " out of range");
    std::vector<Decomposition> S_list{decl_k(d.model.n, k)};
    ExactnessVerdict verdict;
    if (mode == "certificate")
      verdict = exactness_certificate_cor1(d.model, d.train, d.space, S_list,
                                           parse_loss(loss_name));
    else if (mode == "sampling")
      verdict = exactness_probe_sampling(d.model, d.train, d.space, S_list,
                                         probes, sub_seed(seed, "probe"),
                                         budget_epochs);
    else
      throw ConfigError("unknown probe mode: " + mode);
    json vj = verdict_to_json(verdict);
    write_text_file(out / "verdict.json", vj.dump(2) + "\n");
    json rc{{"data", data_dir}, {"mode", mode},     {"decomp", decomp},
            {"k", k},           {"probes", probes}, {"loss", loss_name}};
    write_manifest(out, "probe", rc, seed, {"verdict.json"}, started);
    std::cout << vj.dump(2) << "\n";
    return 0;
  }

  if (*bench) {
    cfg_override(bench, cfg, "--n", "n", bc.data.n);
    cfg_override(bench, cfg, "--d", "d", bc.data.d);
    cfg_override(bench, cfg, "--constraints", "constraints", bc.data.constraints);
    cfg_override(bench, cfg, "--train-sizes", "train_sizes", bc.data.train_sizes);
    cfg_override(bench, cfg, "--test-size", "test_size", bc.data.test_size);
    cfg_override(bench, cfg, "--validation-size", "validation_size",
                 bc.data.validation_size);
    cfg_override(bench, cfg, "--min-feasible", "min_feasible",
                 bc.data.min_feasible);
    cfg_override(bench, cfg, "--min-margin", "min_margin", bc.data.min_margin);
    cfg_override(bench, cfg, "--trials", "trials", bc.data.trials);
    cfg_override(bench, cfg, "--epochs", "epochs", bc.epochs);
    cfg_override(bench, cfg, "--eta", "eta", bc.eta0);
    if (cfg.contains("tune_lambda") && bench->count("--tune-lambda") == 0)
      bc.tune_lambda = cfg.at("tune_lambda").get<bool>();
    bc.seed = seed;
    bc.threads = threads > 0 ? threads : 1;
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    bc.check();
    BenchResult result = run_benchmark(bc);
    write_text_file(out / "bench.csv", benchmark_csv(result));
    json rc{{"n", bc.data.n},
            {"d", bc.data.d},
            {"constraints", bc.data.constraints},
            {"train_sizes", bc.data.train_sizes},
            {"test_size", bc.data.test_size},
            {"trials", bc.data.trials},
            {"epochs", bc.epochs},
            {"eta", bc.eta0},
            {"tune_lambda", bc.tune_lambda},
            {"threads", bc.threads}};
    write_manifest(out, "bench", rc, seed, {"bench.csv"}, started);
    std::cout << "wrote " << (out / "bench.csv").string() << " ("
              << result.rows.size() << " rows)\n";
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
