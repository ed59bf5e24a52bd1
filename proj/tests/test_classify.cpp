#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "gprdl/classify.hpp"
#include "oracles.hpp"

using namespace gprdl;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("gprdl_classify_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("rebin_truth: full-profile window collapses to column class") {
  SceneTruth truth;
  truth.labels.setZero(8, 5);
  truth.labels.block(2, 1, 3, 2).setConstant(2);  // medium halo, columns 1-2
  truth.labels(6, 4) = 3;                         // small halo, column 4

  ClassMap grid = rebin_truth(truth, WindowConfig{});
  REQUIRE(grid.labels.rows() == 1);
  REQUIRE(grid.labels.cols() == 5);
  CHECK(grid.labels(0, 0) == 0);
  CHECK(grid.labels(0, 1) == 2);
  CHECK(grid.labels(0, 2) == 2);
  CHECK(grid.labels(0, 3) == 0);
  CHECK(grid.labels(0, 4) == 3);
}

TEST_CASE("rebin_truth: windowed grid, intersection and lowest-class tie break") {
  SceneTruth truth;
  truth.labels.setZero(8, 2);
  truth.labels(2, 0) = 3;  // sample 2 only
  truth.labels(5, 0) = 1;  // sample 5
  truth.labels(3, 1) = 2;

  WindowConfig w;
  w.length = 4;
  w.stride = 2;  // windows [0,4) [2,6) [4,8)
  ClassMap grid = rebin_truth(truth, w);
  REQUIRE(grid.labels.rows() == 3);
  CHECK(grid.labels(0, 0) == 3);  // [0,4) sees only class 3
  CHECK(grid.labels(1, 0) == 1);  // [2,6) sees classes 3 and 1 -> lowest mine id
  CHECK(grid.labels(2, 0) == 1);  // [4,8) sees class 1
  CHECK(grid.labels(0, 1) == 2);
  CHECK(grid.labels(1, 1) == 2);
  CHECK(grid.labels(2, 1) == 0);
}

TEST_CASE("classify_bscan equals the encode-then-predict composition") {
  const int wl = 12, n_atoms = 10;
  Dictionary D;
  D.atoms = oracles::random_unit_dictionary(wl, n_atoms, 3);

  // train a 2-class SVM on dense codes of signals drawn from two atom pools
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  CodingParams params;
  params.method = CodingMethod::kOmp;
  params.alpha = 1e-6;
  params.max_nonzeros = 3;

  Matrix feats(n_atoms, 60);
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) {
    const int cls = i % 2;
    Vector y = Vector::Zero(wl);
    for (int k = 0; k < 2; ++k)
      y += gauss(rng) * D.atoms.col(cls * 5 + static_cast<int>(rng() % 5));
    feats.col(i) = encode(D, y, params).dense();
    labels.push_back(cls);
  }
  RbfSvmModel model = svm_train(feats, labels, 10.0, 0.5);

  BScan scan;
  scan.data.resize(24, 7);
  for (int j = 0; j < 7; ++j) scan.data.col(j) = oracles::random_vector(24, 100 + j);

  WindowConfig w;
  w.length = wl;
  w.stride = 6;  // windows at samples 0, 6, 12
  ClassMap map = classify_bscan(scan, D, params, model, w);
  REQUIRE(map.labels.rows() == 3);
  REQUIRE(map.labels.cols() == 7);

  for (int r = 0; r < 3; ++r)
    for (int j = 0; j < 7; ++j) {
      Vector sub = scan.data.col(j).segment(r * 6, wl);
      int expected = svm_predict(model, encode(D, sub, params).dense());
      CHECK(map.labels(r, j) == expected);
    }

  // identical columns get identical labels, and reruns are bit-identical
  scan.data.col(6) = scan.data.col(0);
  ClassMap a = classify_bscan(scan, D, params, model, w);
  ClassMap b = classify_bscan(scan, D, params, model, w);
  CHECK(a.labels.col(6) == a.labels.col(0));
  CHECK(a.labels == b.labels);

  Dictionary wrong;
  wrong.atoms = oracles::random_unit_dictionary(24, n_atoms, 4);
  CHECK_THROWS_AS(classify_bscan(scan, wrong, params, model, w), InputError);
}

TEST_CASE("pcc: perfect map and one controlled error") {
  ClassMap truth;
  truth.labels.setZero(4, 10);
  truth.labels.block(0, 0, 4, 5).setConstant(1);  // 20 halo pixels of class 1

  PccReport perfect = pcc(truth, truth);
  REQUIRE(perfect.entries.size() == 4);  // clutter + 3 mine classes, ascending
  for (const auto& e : perfect.entries) {
    CHECK(e.class_id == &e - perfect.entries.data());
    if (e.class_id == 0) {
      CHECK(e.total_pixels == 20);
      CHECK(e.pcc == 1.0);
    } else if (e.class_id == 1) {
      CHECK(e.total_pixels == 20);
      CHECK(e.pcc == 1.0);
      CHECK_FALSE(e.skipped_empty);
    } else {
      CHECK(e.skipped_empty);
      CHECK(e.total_pixels == 0);
    }
  }

  ClassMap dented = truth;
  dented.labels(2, 3) = 2;  // one of the 20 halo pixels misclassified
  PccReport r = pcc(dented, truth);
  CHECK(r.entries[1].correct_pixels == 19);
  CHECK(r.entries[1].pcc == doctest::Approx(0.95));
  CHECK(r.entries[0].pcc == 1.0);  // clutter region untouched
}

TEST_CASE("pcc: random maps match a naive recount oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const int rows = 3 + static_cast<int>(rng() % 4);
    const int cols = 5 + static_cast<int>(rng() % 9);
    ClassMap truth, map;
    truth.labels.resize(rows, cols);
    map.labels.resize(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        truth.labels(i, j) = static_cast<int>(rng() % 4);
        map.labels(i, j) = static_cast<int>(rng() % 4);
      }

    PccReport r = pcc(map, truth);
    REQUIRE(r.entries.size() == 4);
    for (int c = 0; c < 4; ++c) {
      long total = 0, correct = 0;
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
          if (truth.labels(i, j) == c) {
            ++total;
            if (map.labels(i, j) == c) ++correct;
          }
      CHECK(r.entries[static_cast<std::size_t>(c)].total_pixels == total);
      CHECK(r.entries[static_cast<std::size_t>(c)].correct_pixels == correct);
      if (total > 0)
        CHECK(r.entries[static_cast<std::size_t>(c)].pcc ==
              doctest::Approx(static_cast<double>(correct) / static_cast<double>(total))
                  .epsilon(1e-15));
      else
        CHECK(r.entries[static_cast<std::size_t>(c)].skipped_empty);
    }
  }

  ClassMap a, b;
  a.labels.setZero(2, 2);
  b.labels.setZero(3, 2);
  CHECK_THROWS_AS(pcc(a, b), InputError);
}

TEST_CASE("class map CSV round trip") {
  TempDir tmp;
  ClassMap map;
  map.labels.resize(3, 6);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 6; ++j) map.labels(i, j) = static_cast<int>(rng() % 4);

  const auto path = tmp.path / "map.csv";
  write_classmap_csv(map, path);
  ClassMap back = load_classmap_csv(path);
  CHECK(back.labels == map.labels);

  CHECK_THROWS_AS(load_classmap_csv(tmp.path / "missing.csv"), DataError);
}
