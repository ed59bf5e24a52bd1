#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "gprdl/classify.hpp"
#include "gprdl/io.hpp"

using namespace gprdl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("gprdl_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(GPRDL_BIN) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// drop wall-time fields so determinism checks ignore them
json strip_times(json j) {
  if (j.is_object()) {
    json out = json::object();
    for (auto& [k, v] : j.items())
      if (k.find("seconds") == std::string::npos) out[k] = strip_times(v);
    return out;
  }
  if (j.is_array()) {
    json out = json::array();
    for (auto& v : j) out.push_back(strip_times(v));
    return out;
  }
  return j;
}

const char* kPipelineConfig = R"({
  "seed": 9,
  "scene": {
    "n_positions": 50, "n_samples": 96, "clutter_std": 0.1,
    "targets": [{"x0": 0.25, "depth": 0.07, "radius": 0.08,
                 "reflectivity": 2e-9, "class_id": 1}]
  },
  "profiles": {"per_scan": 30},
  "dict": {"n_atoms": 12, "iterations": 3,
           "coding": {"method": "omp", "alpha": 1e-4, "max_nonzeros": 4}},
  "coding": {"method": "omp", "alpha": 1e-4, "max_nonzeros": 4},
  "svm": {"grid": [[1.0, 0.5], [10.0, 1.0]], "folds": 3},
  "sweep": {"grid": [[1, 12], [3, 12]], "method": "lars", "lambda": 0.05}
})";

const char* kBenchConfig = R"({
  "seed": 4,
  "train_scenes": [
    {"n_positions": 60, "n_samples": 96, "clutter_std": 0.1,
     "targets": [{"x0": 0.2, "depth": 0.06, "radius": 0.08,
                  "reflectivity": 2.5e-9, "class_id": 1},
                 {"x0": 0.45, "depth": 0.08, "radius": 0.05,
                  "reflectivity": 1.8e-9, "class_id": 2}]}
  ],
  "test_scenes": [
    {"n_positions": 60, "n_samples": 96, "clutter_std": 0.1,
     "targets": [{"x0": 0.3, "depth": 0.07, "radius": 0.08,
                  "reflectivity": 2.5e-9, "class_id": 1}]}
  ],
  "profiles": {"per_scan": 30, "per_scan_near": 8},
  "dict": {"n_atoms": 12, "iterations": 3},
  "ksvd": {"coding": {"method": "omp", "alpha": 1e-3, "max_nonzeros": 4}},
  "odl": {"coding": {"method": "lars", "lambda": 0.05}, "decay": 0.99},
  "svm": {"grid": [[1.0, 1.0], [10.0, 2.0]], "folds": 3}
})";

}  // namespace

TEST_CASE("identity scene: all-clutter map evaluates to clutter P_CC = 1") {
  TempDir tmp;
  write_file(tmp.path / "cfg.json", R"({
    "seed": 1,
    "scene": {"n_positions": 20, "n_samples": 64, "clutter_std": 0.0, "targets": []}
  })");
  const std::string out = (tmp.path / "d").string();
  REQUIRE(run("generate --config " + (tmp.path / "cfg.json").string() + " --out " + out) == 0);

  // 1 x 20 all-clutter map for the full-profile window grid
  std::string row = "0";
  for (int i = 1; i < 20; ++i) row += ",0";
  write_file(tmp.path / "d" / "map.csv", row + "\n");

  REQUIRE(run("evaluate --config " + (tmp.path / "cfg.json").string() + " --map " +
              (tmp.path / "d" / "map.csv").string() + " --truth " +
              (tmp.path / "d" / "truth.sptr").string() + " --out " + out) == 0);

  json pcc = json::parse(slurp(tmp.path / "d" / "pcc.json"));
  REQUIRE(pcc.at("entries").size() == 4);
  CHECK(pcc["entries"][0]["class_id"] == 0);
  CHECK(pcc["entries"][0]["pcc"] == 1.0);
  CHECK(pcc["entries"][0]["total_pixels"] == 20);
  for (int c = 1; c < 4; ++c) CHECK(pcc["entries"][c]["skipped_empty"] == true);
}

TEST_CASE("full pipeline runs and re-runs bit-identically (excluding timing files)") {
  TempDir tmp;
  const std::string cfg = (tmp.path / "cfg.json").string();
  write_file(tmp.path / "cfg.json", kPipelineConfig);

  for (const std::string d : {"a", "b"}) {
    const std::string out = (tmp.path / d).string();
    REQUIRE(run("generate --config " + cfg + " --out " + out) == 0);
    REQUIRE(run("train-dict --config " + cfg + " --method ksvd --data " + out +
                "/profiles.sptr --out " + out) == 0);
    REQUIRE(run("encode --config " + cfg + " --dict " + out + "/dictionary.sptr --data " +
                out + "/profiles.sptr --out " + out) == 0);
    REQUIRE(run("train-svm --config " + cfg + " --features " + out + "/codes.sptr --out " +
                out) == 0);
    REQUIRE(run("classify --config " + cfg + " --dict " + out + "/dictionary.sptr --model " +
                out + "/model.sptr --bscan " + out + "/scene.sptr --out " + out) == 0);
    REQUIRE(run("evaluate --config " + cfg + " --map " + out + "/map.csv --truth " + out +
                "/truth.sptr --out " + out) == 0);
  }

  for (const char* f : {"scene.sptr", "truth.sptr", "profiles.sptr", "dictionary.sptr",
                        "codes.sptr", "model.sptr", "map.csv", "pcc.csv", "pcc.json",
                        "encode_report.json", "svm_report.json"})
    CHECK(slurp(tmp.path / "a" / f) == slurp(tmp.path / "b" / f));
  // the train report carries wall times; compare it with those stripped
  CHECK(strip_times(json::parse(slurp(tmp.path / "a" / "train_report.json"))) ==
        strip_times(json::parse(slurp(tmp.path / "b" / "train_report.json"))));
}

TEST_CASE("classify map equals the in-process encode-then-predict composition") {
  TempDir tmp;
  const std::string cfg = (tmp.path / "cfg.json").string();
  write_file(tmp.path / "cfg.json", kPipelineConfig);
  const std::string out = (tmp.path / "d").string();
  REQUIRE(run("generate --config " + cfg + " --out " + out) == 0);
  REQUIRE(run("train-dict --config " + cfg + " --method odl --data " + out +
              "/profiles.sptr --out " + out) == 0);
  REQUIRE(run("encode --config " + cfg + " --dict " + out + "/dictionary.sptr --data " +
              out + "/profiles.sptr --out " + out) == 0);
  REQUIRE(run("train-svm --config " + cfg + " --features " + out + "/codes.sptr --out " +
              out) == 0);
  REQUIRE(run("classify --config " + cfg + " --dict " + out + "/dictionary.sptr --model " +
              out + "/model.sptr --bscan " + out + "/scene.sptr --out " + out) == 0);

  // compose the same answer from the artifacts across the process boundary
  Dictionary D = load_dictionary(tmp.path / "d" / "dictionary.sptr");
  RbfSvmModel model = load_svm_model(tmp.path / "d" / "model.sptr");
  BScan scan = load_bscan(tmp.path / "d" / "scene.sptr");
  CodingParams params;
  params.method = CodingMethod::kOmp;
  params.alpha = 1e-4;
  params.max_nonzeros = 4;

  ClassMap map = load_classmap_csv(tmp.path / "d" / "map.csv");
  REQUIRE(map.labels.rows() == 1);
  REQUIRE(map.labels.cols() == scan.n_positions());
  for (Eigen::Index j = 0; j < scan.n_positions(); ++j) {
    const int expected = svm_predict(model, encode(D, scan.data.col(j), params).dense());
    CHECK(map.labels(0, j) == expected);
  }
}

TEST_CASE("analyze writes a sweep whose reference row has zero K-S distance") {
  TempDir tmp;
  const std::string cfg = (tmp.path / "cfg.json").string();
  write_file(tmp.path / "cfg.json", kPipelineConfig);
  const std::string out = (tmp.path / "d").string();
  REQUIRE(run("generate --config " + cfg + " --out " + out) == 0);
  REQUIRE(run("analyze --config " + cfg + " --data " + out + "/profiles.sptr --out " +
              out) == 0);
  json sweep = json::parse(slurp(tmp.path / "d" / "sweep.json"));
  REQUIRE(sweep.at("rows").size() == 2);
  CHECK(sweep["rows"][0]["is_reference"] == true);
  CHECK(sweep["rows"][0]["ks_vs_reference"] == 0.0);
  CHECK(fs::exists(tmp.path / "d" / "sweep.csv"));
}

TEST_CASE("benchmark: deterministic modulo wall times, Table-shaped CSV") {
  TempDir tmp;
  const std::string cfg = (tmp.path / "cfg.json").string();
  write_file(tmp.path / "cfg.json", kBenchConfig);
  REQUIRE(run("benchmark --config " + cfg + " --out " + (tmp.path / "a").string()) == 0);
  REQUIRE(run("benchmark --config " + cfg + " --out " + (tmp.path / "b").string()) == 0);

  json a = json::parse(slurp(tmp.path / "a" / "benchmark.json"));
  json b = json::parse(slurp(tmp.path / "b" / "benchmark.json"));
  CHECK(strip_times(a) == strip_times(b));
  CHECK(slurp(tmp.path / "a" / "benchmark.csv") == slurp(tmp.path / "b" / "benchmark.csv"));

  // Table shape: header + one row per method, methods x 4 class columns
  std::istringstream csv(slurp(tmp.path / "a" / "benchmark.csv"));
  std::string line;
  REQUIRE(std::getline(csv, line));
  CHECK(line == "method,clutter,mine_large,mine_medium,mine_small");
  int rows = 0;
  bool saw_ksvd = false, saw_odl = false;
  while (std::getline(csv, line)) {
    ++rows;
    saw_ksvd |= line.rfind("ksvd,", 0) == 0;
    saw_odl |= line.rfind("odl,", 0) == 0;
    CHECK(std::count(line.begin(), line.end(), ',') == 4);
  }
  CHECK(rows == 2);
  CHECK(saw_ksvd);
  CHECK(saw_odl);

  for (const auto& [name, m] : a.at("methods").items()) {
    CHECK(m.at("learn_seconds").get<double>() > 0.0);
    CHECK(m.at("encode_seconds").get<double>() > 0.0);
    CHECK(m.at("classify_seconds").get<double>() > 0.0);
    CHECK(m.at("pcc").size() == 4);
  }

  // emitted artifacts round-trip through the loaders
  for (const std::string mth : {"ksvd", "odl"}) {
    Dictionary D = load_dictionary(tmp.path / "a" / ("dictionary_" + mth + ".sptr"));
    CHECK_NOTHROW(D.validate());
    CHECK_NOTHROW(load_svm_model(tmp.path / "a" / ("model_" + mth + ".sptr")));
  }
}

TEST_CASE("exit codes: 1 usage, 2 data/format, 3 numerical") {
  TempDir tmp;
  CHECK(run("no-such-command") == 1);
  CHECK(run("train-dict --out " + tmp.path.string()) == 1);  // missing --data
  CHECK(run("generate --config " + (tmp.path / "missing.json").string() + " --out " +
            tmp.path.string()) == 1);
  write_file(tmp.path / "bad.json", "{ not json");
  CHECK(run("generate --config " + (tmp.path / "bad.json").string() + " --out " +
            tmp.path.string()) == 1);

  // data errors: nonexistent container, garbage container
  write_file(tmp.path / "cfg.json", kPipelineConfig);
  CHECK(run("train-dict --config " + (tmp.path / "cfg.json").string() + " --data " +
            (tmp.path / "nope.sptr").string() + " --out " + tmp.path.string()) == 2);
  write_file(tmp.path / "garbage.sptr", "XXXXXXXXXXXXXXXX");
  CHECK(run("train-dict --config " + (tmp.path / "cfg.json").string() + " --data " +
            (tmp.path / "garbage.sptr").string() + " --out " + tmp.path.string()) == 2);

  // numerical/analysis error: a sweep whose lambda zeroes every code
  const std::string out = (tmp.path / "d").string();
  REQUIRE(run("generate --config " + (tmp.path / "cfg.json").string() + " --out " + out) == 0);
  write_file(tmp.path / "cfg3.json", R"({
    "seed": 9,
    "sweep": {"grid": [[1, 12]], "method": "lars", "lambda": 1e12}
  })");
  CHECK(run("analyze --config " + (tmp.path / "cfg3.json").string() + " --data " + out +
            "/profiles.sptr --out " + out) == 3);
}
