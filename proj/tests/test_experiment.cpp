#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "typmatch/experiment.hpp"
#include "typmatch/rng.hpp"

using namespace typmatch;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("typmatch_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

const char* kSweepConfig = R"({
  "kind": "match-sweep",
  "name": "sweep",
  "n": 5,
  "trials": 3,
  "seed": 7,
  "dist": {"alphabets": [2, 2], "pmf": [0.4, 0.1, 0.2, 0.3]}
})";
}  // namespace

TEST_CASE("config parsing validates the kind") {
  CHECK_THROWS(ExperimentConfig::from_json_text("{\"kind\": \"nope\"}"));
  CHECK_THROWS(ExperimentConfig::from_json_text("{}"));
  CHECK_THROWS(ExperimentConfig::from_json_text("not json"));
  ExperimentConfig cfg = ExperimentConfig::from_json_text(kSweepConfig);
  CHECK(cfg.kind == "match-sweep");
  CHECK(cfg.name == "sweep");
}

TEST_CASE("distribution json accepts explicit tables and erasure shorthand") {
  JointDistribution d = dist_from_json_text(
      "{\"alphabets\": [2, 2], \"pmf\": [0.5, 0.0, 0.25, 0.25]}");
  CHECK(d.cell(0) == doctest::Approx(0.5));
  JointDistribution e =
      dist_from_json_text("{\"erasure\": {\"p\": 0.5, \"s\": 0.5}}");
  CHECK(e.cell(0) == doctest::Approx(0.5));
  CHECK(e.cell(2) == doctest::Approx(0.25));
  CHECK_THROWS(dist_from_json_text("{\"pmf\": [1.0]}"));
  JointDistribution back = dist_from_json_text(dist_to_json_text(d));
  CHECK(back.pmf() == d.pmf());
}

TEST_CASE("rerunning an experiment reproduces the csv byte for byte") {
  auto dir1 = temp_dir("det1");
  auto dir2 = temp_dir("det2");
  ExperimentConfig cfg = ExperimentConfig::from_json_text(kSweepConfig);
  ExperimentOutcome a = run_experiment(cfg, dir1.string());
  ExperimentOutcome b = run_experiment(cfg, dir2.string());
  CHECK(a.rows == b.rows);
  CHECK(a.rows > 0);
  CHECK(slurp(a.csv_path) == slurp(b.csv_path));
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("csv rows have the fixed schema and no timing columns") {
  auto dir = temp_dir("schema");
  ExperimentConfig cfg = ExperimentConfig::from_json_text(kSweepConfig);
  ExperimentOutcome out = run_experiment(cfg, dir.string());
  std::string csv = slurp(out.csv_path);
  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "experiment,n,trial,seed,metric,value");
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
    CHECK(line.find("wall") == std::string::npos);
  }
  CHECK(rows == out.rows);

  std::string manifest = slurp(out.manifest_path);
  CHECK(manifest.find("typmatch-manifest-v1") != std::string::npos);
  CHECK(manifest.find("config_hash") != std::string::npos);
  CHECK(manifest.find(kLibraryVersion) != std::string::npos);
  CHECK(manifest.find("wall_ms") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("bound verification at tiny n passes and reports rows") {
  auto dir = temp_dir("bounds");
  ExperimentConfig cfg = ExperimentConfig::from_json_text(R"({
    "kind": "bound-verify",
    "name": "bv",
    "n": 4,
    "eps_list": [0.2],
    "dist": {"alphabets": [2, 2], "pmf": [0.4, 0.1, 0.2, 0.3]}
  })");
  ExperimentOutcome out = run_experiment(cfg, dir.string());
  CHECK_FALSE(out.verification_failed);
  CHECK(out.rows > 0);
  std::string csv = slurp(out.csv_path);
  CHECK(csv.find("exact/") != std::string::npos);
  CHECK(csv.find("bound_e/") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("seeded sweep tags metrics with the seed budget") {
  auto dir = temp_dir("seeded");
  ExperimentConfig cfg = ExperimentConfig::from_json_text(R"({
    "kind": "seeded-sweep",
    "name": "stm",
    "n": 40,
    "trials": 2,
    "seed": 3,
    "lambda_list": [5, 10],
    "dist": {"erasure": {"p": 0.5, "s": 0.5}}
  })");
  ExperimentOutcome out = run_experiment(cfg, dir.string());
  std::string csv = slurp(out.csv_path);
  CHECK(csv.find("accuracy[lambda=5]") != std::string::npos);
  CHECK(csv.find("accuracy[lambda=10]") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("erasure scan experiment emits per-alpha ratios") {
  auto dir = temp_dir("erasure");
  ExperimentConfig cfg = ExperimentConfig::from_json_text(R"({
    "kind": "erasure-scan",
    "name": "scan",
    "s_list": [0.3],
    "alpha_step": 0.1
  })");
  ExperimentOutcome out = run_experiment(cfg, dir.string());
  std::string csv = slurp(out.csv_path);
  CHECK(csv.find("min_ratio[s=") != std::string::npos);
  CHECK(csv.find("ratio[s=") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("counting verification passes at small n") {
  CountingReport rep = verify_counting(4);
  CHECK(rep.ok);
  CHECK(rep.checks > 0);
  CHECK(rep.failures.empty());
  CountingReport tiny = verify_counting(1);
  CHECK(tiny.ok);
}

TEST_CASE("counting verification is exposed as an experiment kind") {
  auto dir = temp_dir("counting");
  ExperimentConfig cfg = ExperimentConfig::from_json_text(
      "{\"kind\": \"counting-verify\", \"name\": \"count\", \"n_max\": 3}");
  ExperimentOutcome out = run_experiment(cfg, dir.string());
  CHECK_FALSE(out.verification_failed);
  CHECK(out.rows > 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("worker count honors the environment cap") {
  setenv("TYPMATCH_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  setenv("TYPMATCH_THREADS", "0", 1);
  CHECK(worker_count() >= 1);
  unsetenv("TYPMATCH_THREADS");
  CHECK(worker_count() >= 1);
}

TEST_CASE("trial seeds derive from master seed and experiment name") {
  CHECK(derive_seed(7, "sweep", 0) != derive_seed(7, "sweep", 1));
  CHECK(derive_seed(7, "sweep", 0) != derive_seed(8, "sweep", 0));
}
