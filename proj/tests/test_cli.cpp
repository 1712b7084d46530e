#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "declearn/serialization.hpp"

using namespace declearn;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = DECLEARN_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("declearn_cli_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str(const std::string& sub = "") const {
    return (path / sub).string();
  }
};

int run(const std::string& args) {
  std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string gen_small(const TempDir& tmp, const std::string& sub,
                      std::uint64_t seed) {
  std::string dir = tmp.str(sub);
  REQUIRE(run("gen --n 6 --d 4 --constraints 2 --min-feasible 10 "
              "--train-sizes 12 --test-size 8 --validation-size 4 --seed " +
              std::to_string(seed) + " --out " + dir) == 0);
  return dir;
}

}  // namespace

TEST_CASE("gen writes the dataset files and a manifest") {
  TempDir tmp;
  std::string dir = gen_small(tmp, "data", 7);
  for (const char* f : {"train.jsonl", "validation.jsonl", "test.jsonl",
                        "space.json", "meta.json", "manifest.json"})
    CHECK(fs::exists(fs::path(dir) / f));
  OutputSpace space = space_from_json(read_json_file(fs::path(dir) / "space.json"));
  CHECK(space.count_feasible() >= 10);
  json manifest = read_json_file(fs::path(dir) / "manifest.json");
  CHECK(manifest["command"] == "gen");
  CHECK(manifest["seed"] == 7);
  CHECK(manifest["config"]["n"] == 6);
}

TEST_CASE("gen is byte-identical for a repeated seed") {
  TempDir tmp;
  std::string a = gen_small(tmp, "a", 13);
  std::string b = gen_small(tmp, "b", 13);
  std::string c = gen_small(tmp, "c", 14);
  for (const char* f : {"train.jsonl", "test.jsonl", "space.json"}) {
    CHECK(read_text_file(fs::path(a) / f) == read_text_file(fs::path(b) / f));
  }
  CHECK(read_text_file(fs::path(a) / "train.jsonl") !=
        read_text_file(fs::path(c) / "train.jsonl"));
}

TEST_CASE("config file values are overridden by flags") {
  TempDir tmp;
  write_text_file(tmp.path / "cfg.json",
                  "{\"n\": 6, \"d\": 4, \"constraints\": 0, "
                  "\"min_feasible\": 10, \"train_sizes\": [5], "
                  "\"test_size\": 3, \"validation_size\": 3}\n");
  REQUIRE(run("gen --config " + tmp.str("cfg.json") + " --d 2 --seed 1 --out " +
              tmp.str("out")) == 0);
  json manifest = read_json_file(tmp.path / "out" / "manifest.json");
  CHECK(manifest["config"]["n"] == 6);   // from the config file
  CHECK(manifest["config"]["d"] == 2);   // flag wins
}

TEST_CASE("invalid config exits 2, missing files exit 3") {
  TempDir tmp;
  CHECK(run("gen --n 0 --out " + tmp.str("x")) == 2);
  CHECK(run("train --data " + tmp.str("nothing") + " --algo gl") == 3);
  CHECK(run("train --data " + tmp.str("nothing") + " --algo bogus") == 2);
  CHECK(run("bogus-command") == 2);
}

TEST_CASE("train gl equals decl-k with k = n, and writes artifacts") {
  TempDir tmp;
  std::string data = gen_small(tmp, "data", 21);
  REQUIRE(run("train --data " + data +
              " --algo gl --loss hamming --epochs 15 --seed 5 --out " +
              tmp.str("gl")) == 0);
  REQUIRE(run("train --data " + data +
              " --algo decl-k --k 6 --loss hamming --epochs 15 --seed 5 --out " +
              tmp.str("dk")) == 0);
  json wg = read_json_file(tmp.path / "gl" / "weights.json");
  json wd = read_json_file(tmp.path / "dk" / "weights.json");
  CHECK(wg["weights"] == wd["weights"]);
  CHECK(fs::exists(tmp.path / "gl" / "report.json"));

  json report = read_json_file(tmp.path / "gl" / "report.json");
  auto trace = report["decl_objective"].get<std::vector<double>>();
  REQUIRE_FALSE(trace.empty());
  CHECK(trace.back() <= trace.front());
}

TEST_CASE("train rejects decl-spair on singleton models and bad k") {
  TempDir tmp;
  std::string data = gen_small(tmp, "data", 2);
  CHECK(run("train --data " + data + " --algo decl-spair --out " +
            tmp.str("x")) == 2);
  CHECK(run("train --data " + data + " --algo decl-k --k 9 --out " +
            tmp.str("y")) == 2);
}

TEST_CASE("eval with constraints on yields only feasible predictions") {
  TempDir tmp;
  std::string data = gen_small(tmp, "data", 31);
  REQUIRE(run("train --data " + data + " --algo ll --epochs 10 --out " +
              tmp.str("ll")) == 0);
  REQUIRE(run("eval --data " + data + " --weights " +
              tmp.str("ll/weights.json") + " --constraints on --out " +
              tmp.str("eval")) == 0);
  json metrics = read_json_file(tmp.path / "eval" / "metrics.json");
  CHECK(metrics["infeasible_predictions"] == 0);
  CHECK(run("eval --data " + data + " --weights " + tmp.str("ll/weights.json") +
            " --constraints maybe --out " + tmp.str("e2")) == 2);
}

TEST_CASE("probe certificate on a 1-OR-clause space certifies decl-2") {
  TempDir tmp;
  // replace the generated space/golds with a single positive OR clause
  std::string dir = tmp.str("data");
  fs::create_directories(dir);
  Clause clause{Literal{0, false}, Literal{1, false}, Literal{2, false}};
  OutputSpace space(5, 2, ConstraintSet{{}, {clause}});
  write_text_file(fs::path(dir) / "space.json", space_to_json(space).dump());
  ScoringModel model = ScoringModel::singleton(5, 2);
  json meta{{"seed", 0}, {"model", model_to_json(model)}};
  write_text_file(fs::path(dir) / "meta.json", meta.dump());
  Dataset D{{InputMatrix{1, 2, {1.0, -0.5}}, {1, 0, 0, 1, 0}},
            {InputMatrix{1, 2, {-0.25, 2.0}}, {0, 1, 1, 0, 0}}};
  write_text_file(fs::path(dir) / "train.jsonl", dataset_to_jsonl(D));
  write_text_file(fs::path(dir) / "validation.jsonl", dataset_to_jsonl(D));
  write_text_file(fs::path(dir) / "test.jsonl", dataset_to_jsonl(D));

  REQUIRE(run("probe --data " + dir +
              " --mode certificate --decomp decl-k --k 2 --out " +
              tmp.str("probe")) == 0);
  json verdict = read_json_file(tmp.path / "probe" / "verdict.json");
  CHECK(verdict["outcome"] == "exact-certified");

  REQUIRE(run("probe --data " + dir +
              " --mode sampling --k 2 --probes 10 --seed 3 --out " +
              tmp.str("probe2")) == 0);
  json v2 = read_json_file(tmp.path / "probe2" / "verdict.json");
  CHECK(v2["outcome"] == "no-counterexample");
}

TEST_CASE("bench emits the full CSV grid") {
  TempDir tmp;
  REQUIRE(run("bench --n 5 --d 3 --constraints 2 --min-feasible 10 "
              "--train-sizes 4 8 --test-size 6 --validation-size 4 "
              "--trials 2 --epochs 3 --seed 2 --out " +
              tmp.str("bench")) == 0);
  std::string csv = read_text_file(tmp.path / "bench" / "bench.csv");
  CHECK(csv.find("trial,train_size,algorithm") != std::string::npos);
  // 2 trials x 2 sizes x 6 algorithm rows + 2 header lines
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 + 24);
}
