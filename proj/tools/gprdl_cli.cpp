// gprdl: sparse dictionary learning toolkit for GPR range profiles.
//
// Subcommands wrap the library modules one-to-one; every stochastic stage
// draws its seed from the global seed and the stage name, so a re-run with
// the same config and seed reproduces all non-timing outputs bit-exactly.
//
// Exit codes: 0 success, 1 usage/config error, 2 data/format error,
// 3 numerical/convergence error.

#include <CLI11.hpp>
#include <array>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "gprdl/analysis.hpp"
#include "gprdl/classify.hpp"
#include "gprdl/io.hpp"
#include "gprdl/learn.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gprdl;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string method = "ksvd";
  bool verbose = false;

  // per-command input files
  std::string data, dict, model, bscan, map, truth, features;
};

json load_config(const Options& opt) {
  if (opt.config_path.empty()) return json::object();
  std::ifstream in(opt.config_path);
  if (!in) throw ConfigError("config: cannot open " + opt.config_path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + opt.config_path + ": " + e.what());
  }
}

std::uint64_t global_seed(const json& cfg, const Options& opt) {
  if (opt.seed_given) return opt.seed;
  return cfg.value("seed", std::uint64_t{0});
}

void note(const Options& opt, const std::string& msg) {
  if (opt.verbose) std::cerr << "[gprdl] " << msg << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

// ---- config section parsers ------------------------------------------------

SyntheticSceneConfig parse_scene(const json& j) {
  SyntheticSceneConfig c;
  c.n_positions = j.value("n_positions", c.n_positions);
  c.n_samples = j.value("n_samples", c.n_samples);
  c.dt = j.value("dt", c.dt);
  c.dx = j.value("dx", c.dx);
  c.wave_velocity = j.value("wave_velocity", c.wave_velocity);
  c.wavelet_center_freq = j.value("wavelet_center_freq", c.wavelet_center_freq);
  c.clutter_std = j.value("clutter_std", c.clutter_std);
  c.clutter_corr_length = j.value("clutter_corr_length", c.clutter_corr_length);
  c.surface_ringing_amp = j.value("surface_ringing_amp", c.surface_ringing_amp);
  for (const json& t : j.value("targets", json::array())) {
    TargetSpec spec;
    spec.x0 = t.value("x0", spec.x0);
    spec.depth = t.value("depth", spec.depth);
    spec.radius = t.value("radius", spec.radius);
    spec.reflectivity = t.value("reflectivity", spec.reflectivity);
    const int cls = t.value("class_id", static_cast<int>(spec.class_id));
    if (cls < 1 || cls > 3)
      throw ConfigError("config: target class_id must be 1, 2, or 3");
    spec.class_id = static_cast<ClassId>(cls);
    c.targets.push_back(spec);
  }
  return c;
}

CodingMethod parse_method_name(const std::string& name, const std::string& where) {
  if (name == "omp") return CodingMethod::kOmp;
  if (name == "lars") return CodingMethod::kLarsLasso;
  throw ConfigError("config: " + where + " method must be 'omp' or 'lars', got '" +
                    name + "'");
}

CodingParams parse_coding(const json& j) {
  CodingParams p;
  p.method = parse_method_name(j.value("method", std::string("omp")), "coding");
  p.alpha = j.value("alpha", p.alpha);
  p.lambda = j.value("lambda", p.lambda);
  p.max_nonzeros = j.value("max_nonzeros", p.max_nonzeros);
  return p;
}

DictLearnConfig parse_dict(const json& j) {
  DictLearnConfig c;
  c.n_atoms = j.value("n_atoms", c.n_atoms);
  c.iterations = j.value("iterations", c.iterations);
  c.decay = j.value("decay", c.decay);
  const std::string init = j.value("init", std::string("random_columns"));
  if (init == "random_columns") c.init = DictInit::kRandomColumns;
  else if (init == "random_gaussian") c.init = DictInit::kRandomGaussian;
  else throw ConfigError("config: dict init must be 'random_columns' or 'random_gaussian'");
  if (j.contains("coding")) c.coding = parse_coding(j.at("coding"));
  return c;
}

WindowConfig parse_window(const json& cfg) {
  WindowConfig w;
  const json j = cfg.value("window", json::object());
  w.length = j.value("length", w.length);
  w.stride = j.value("stride", w.stride);
  return w;
}

NormalizeMode parse_normalize(const json& j) {
  const std::string mode = j.value("normalize", std::string("none"));
  if (mode == "none") return NormalizeMode::kNone;
  if (mode == "unit_l2") return NormalizeMode::kUnitL2;
  if (mode == "zscore") return NormalizeMode::kZScore;
  throw ConfigError("config: profiles normalize must be none, unit_l2, or zscore");
}

std::vector<std::pair<double, double>> parse_svm_grid(const json& cfg) {
  std::vector<std::pair<double, double>> grid;
  const json j = cfg.value("svm", json::object());
  for (const json& p : j.value("grid", json::array({{1.0, 0.5}, {10.0, 0.5},
                                                    {1.0, 2.0}, {10.0, 2.0}}))) {
    if (!p.is_array() || p.size() != 2)
      throw ConfigError("config: svm grid entries must be [C, gamma] pairs");
    grid.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return grid;
}

const char* method_name(CodingMethod m) {
  return m == CodingMethod::kOmp ? "omp" : "lars";
}

// ---- shared pipeline pieces -------------------------------------------------

std::pair<Dictionary, LearnReport> train_dictionary(const std::string& method,
                                                    const ProfileMatrix& Y,
                                                    DictLearnConfig cfg,
                                                    std::uint64_t gseed) {
  cfg.seed = stage_seed(gseed, "train-dict:" + method);
  if (method == "ksvd") return ksvd_train(Y, cfg);
  if (method == "odl") return odl_train(Y, cfg);
  throw ConfigError("method must be 'ksvd' or 'odl', got '" + method + "'");
}

ProfileMatrix codes_to_features(const Dictionary& D, const ProfileMatrix& Y,
                                const std::vector<SparseCode>& codes) {
  ProfileMatrix feats;
  feats.data.resize(D.atoms.cols(), Y.count());
  for (Eigen::Index i = 0; i < Y.count(); ++i)
    feats.data.col(i) = codes[static_cast<std::size_t>(i)].dense();
  feats.labels = Y.labels;
  return feats;
}

json learn_report_json(const std::string& method, const LearnReport& rep) {
  return json{{"method", method},
              {"objective_trace", rep.objective_trace},
              {"replaced_atoms", rep.replaced_atoms},
              {"wall_time_coding_seconds", rep.wall_time_coding},
              {"wall_time_update_seconds", rep.wall_time_update}};
}

// ---- subcommands -------------------------------------------------------------

void cmd_generate(const json& cfg, const Options& opt) {
  if (!cfg.contains("scene")) throw ConfigError("config: generate needs a 'scene' section");
  SyntheticSceneConfig scene = parse_scene(cfg.at("scene"));
  const std::uint64_t gseed = global_seed(cfg, opt);
  scene.seed = stage_seed(gseed, "generate");

  auto [scan, truth] = generate_synthetic_bscan(scene);
  const fs::path out(opt.out_dir);
  save_bscan(scan, out / "scene.sptr");
  save_truth(truth, out / "truth.sptr");
  note(opt, "scene: " + std::to_string(scan.n_samples()) + " samples x " +
                std::to_string(scan.n_positions()) + " positions");

  if (cfg.contains("profiles")) {
    const json& pj = cfg.at("profiles");
    ProfileMatrix pm = extract_training_profiles(
        {scan}, {truth}, pj.value("per_scan", 50), pj.value("near_target_only", false),
        stage_seed(gseed, "extract-profiles"));
    pm = normalize_profiles(pm, parse_normalize(pj));
    save_profiles(pm, out / "profiles.sptr");
    note(opt, "profiles: " + std::to_string(pm.count()) + " columns");
  }
}

void cmd_train_dict(const json& cfg, const Options& opt) {
  if (opt.data.empty()) throw ConfigError("train-dict: --data is required");
  ProfileMatrix Y = load_profiles(opt.data);
  DictLearnConfig dc = parse_dict(cfg.value("dict", json::object()));
  if (cfg.contains("coding")) dc.coding = parse_coding(cfg.at("coding"));
  // each trainer is defined with its own coder; the config only tunes it
  dc.coding.method = opt.method == "odl" ? CodingMethod::kLarsLasso : CodingMethod::kOmp;
  const std::uint64_t gseed = global_seed(cfg, opt);

  auto [D, rep] = train_dictionary(opt.method, Y, dc, gseed);
  const fs::path out(opt.out_dir);
  const json provenance{{"method", opt.method},
                        {"n_atoms", dc.n_atoms},
                        {"iterations", dc.iterations},
                        {"coding", method_name(dc.coding.method)},
                        {"seed", gseed}};
  save_dictionary(D, out / "dictionary.sptr", provenance);
  write_json(learn_report_json(opt.method, rep), out / "train_report.json");
  note(opt, "final objective " + std::to_string(rep.objective_trace.back()));
}

void cmd_encode(const json& cfg, const Options& opt) {
  if (opt.dict.empty() || opt.data.empty())
    throw ConfigError("encode: --dict and --data are required");
  Dictionary D = load_dictionary(opt.dict);
  ProfileMatrix Y = load_profiles(opt.data);
  CodingParams params = parse_coding(cfg.value("coding", json::object()));

  std::vector<SparseCode> codes = batch_encode(D, Y, params);
  int degenerate = 0;
  for (const SparseCode& c : codes) degenerate += c.degenerate ? 1 : 0;
  const fs::path out(opt.out_dir);
  save_profiles(codes_to_features(D, Y, codes), out / "codes.sptr");
  write_json(json{{"columns", Y.count()},
                  {"degenerate", degenerate},
                  {"mean_sparsity", mean_sparsity(codes)},
                  {"method", method_name(params.method)}},
             out / "encode_report.json");
}

void cmd_analyze(const json& cfg, const Options& opt) {
  if (opt.data.empty()) throw ConfigError("analyze: --data is required");
  ProfileMatrix Y = load_profiles(opt.data);
  if (!cfg.contains("sweep")) throw ConfigError("config: analyze needs a 'sweep' section");
  const json& sj = cfg.at("sweep");

  SweepConfig sc;
  for (const json& p : sj.value("grid", json::array())) {
    if (!p.is_array() || p.size() != 2)
      throw ConfigError("config: sweep grid entries must be [iterations, n_atoms] pairs");
    sc.grid.push_back({p[0].get<int>(), p[1].get<int>()});
  }
  sc.reference_index = sj.value("reference_index", std::size_t{0});
  sc.method = parse_method_name(sj.value("method", std::string("lars")), "sweep");
  sc.lambda = sj.value("lambda", sc.lambda);
  sc.alpha = sj.value("alpha", sc.alpha);
  sc.seed = stage_seed(global_seed(cfg, opt), "analyze");

  SweepResult result = parameter_sweep(Y, sc);
  const fs::path out(opt.out_dir);
  write_sweep_csv(result, out / "sweep.csv");
  json rows = json::array();
  for (const SweepRow& r : result.rows)
    rows.push_back(json{{"iterations", r.point.iterations},
                        {"n_atoms", r.point.n_atoms},
                        {"mean", r.mean},
                        {"stdev", r.stdev},
                        {"cv", r.cv},
                        {"ks_vs_reference", r.ks_vs_reference},
                        {"is_reference", r.is_reference},
                        {"learn_seconds", r.learn_seconds}});
  write_json(json{{"rows", rows}}, out / "sweep.json");
}

void cmd_train_svm(const json& cfg, const Options& opt) {
  if (opt.features.empty()) throw ConfigError("train-svm: --features is required");
  ProfileMatrix feats = load_profiles(opt.features);
  if (!feats.labels)
    throw DataError(opt.features + ": feature container has no labels");

  const auto grid = parse_svm_grid(cfg);
  const int folds = cfg.value("svm", json::object()).value("folds", 5);
  const std::uint64_t gseed = global_seed(cfg, opt);
  CvResult cv = cross_validate(feats.data, *feats.labels, grid, folds,
                               stage_seed(gseed, "svm-cv"));
  RbfSvmModel model = svm_train(feats.data, *feats.labels, cv.best_C, cv.best_gamma);

  const fs::path out(opt.out_dir);
  save_svm_model(model, out / "model.sptr");
  write_json(json{{"best_C", cv.best_C},
                  {"best_gamma", cv.best_gamma},
                  {"folds", folds},
                  {"mean_accuracy", cv.mean_accuracy}},
             out / "svm_report.json");
}

void cmd_classify(const json& cfg, const Options& opt) {
  if (opt.dict.empty() || opt.model.empty() || opt.bscan.empty())
    throw ConfigError("classify: --dict, --model, and --bscan are required");
  Dictionary D = load_dictionary(opt.dict);
  RbfSvmModel model = load_svm_model(opt.model);
  BScan scan = load_bscan(opt.bscan);
  CodingParams params = parse_coding(cfg.value("coding", json::object()));
  WindowConfig window = parse_window(cfg);

  ClassMap map = classify_bscan(scan, D, params, model, window);
  const fs::path out(opt.out_dir);
  write_classmap_csv(map, out / "map.csv");
  write_classmap_sidecar(out / "map.classes.json");
}

void cmd_evaluate(const json& cfg, const Options& opt) {
  if (opt.map.empty() || opt.truth.empty())
    throw ConfigError("evaluate: --map and --truth are required");
  ClassMap map = load_classmap_csv(opt.map);
  SceneTruth truth = load_truth(opt.truth);
  ClassMap grid = rebin_truth(truth, parse_window(cfg));
  if (map.labels.rows() != grid.labels.rows() || map.labels.cols() != grid.labels.cols())
    throw DataError("evaluate: map " + opt.map + " is not congruent with truth " +
                    opt.truth + " under the configured window");

  PccReport report = pcc(map, grid);
  const fs::path out(opt.out_dir);
  write_pcc_csv(report, out / "pcc.csv");
  json entries = json::array();
  for (const PccEntry& e : report.entries)
    entries.push_back(json{{"class_id", e.class_id},
                           {"class_name", class_name(static_cast<ClassId>(e.class_id))},
                           {"total_pixels", e.total_pixels},
                           {"correct_pixels", e.correct_pixels},
                           {"pcc", e.pcc},
                           {"skipped_empty", e.skipped_empty}});
  write_json(json{{"entries", entries}}, out / "pcc.json");
}

struct MethodOutcome {
  double learn_seconds = 0.0;
  double update_seconds = 0.0;
  double encode_seconds = 0.0;
  double classify_seconds = 0.0;
  double mean_sparsity = 0.0;
  double best_C = 0.0, best_gamma = 0.0;
  // pooled halo counts over all test scenes, index = class id
  std::array<long, 4> total{};
  std::array<long, 4> correct{};

  double pcc_of(int cls) const {
    return total[static_cast<std::size_t>(cls)] > 0
               ? static_cast<double>(correct[static_cast<std::size_t>(cls)]) /
                     static_cast<double>(total[static_cast<std::size_t>(cls)])
               : 0.0;
  }
};

void cmd_benchmark(const json& cfg, const Options& opt) {
  if (!cfg.contains("train_scenes") || !cfg.contains("test_scenes"))
    throw ConfigError("config: benchmark needs 'train_scenes' and 'test_scenes'");
  const std::uint64_t gseed = global_seed(cfg, opt);

  auto render = [&](const json& scenes, const std::string& role) {
    std::vector<BScan> scans;
    std::vector<SceneTruth> truths;
    int i = 0;
    for (const json& sj : scenes) {
      SyntheticSceneConfig sc = parse_scene(sj);
      sc.seed = stage_seed(gseed, "scene:" + role + ":" + std::to_string(i++));
      auto [scan, truth] = generate_synthetic_bscan(sc);
      scans.push_back(std::move(scan));
      truths.push_back(std::move(truth));
    }
    return std::pair(std::move(scans), std::move(truths));
  };
  auto [train_scans, train_truths] = render(cfg.at("train_scenes"), "train");
  auto [test_scans, test_truths] = render(cfg.at("test_scenes"), "test");

  const json pj = cfg.value("profiles", json::object());
  const NormalizeMode norm = parse_normalize(pj);
  ProfileMatrix Y = extract_training_profiles(train_scans, train_truths,
                                              pj.value("per_scan", 50),
                                              pj.value("near_target_only", false),
                                              stage_seed(gseed, "extract-profiles"));
  if (const int near = pj.value("per_scan_near", 0); near > 0) {
    // balance the class mix with extra draws restricted to mine halos
    ProfileMatrix extra = extract_training_profiles(
        train_scans, train_truths, near, true, stage_seed(gseed, "extract-near"));
    const Eigen::Index base = Y.count();
    Y.data.conservativeResize(Eigen::NoChange, base + extra.count());
    Y.data.rightCols(extra.count()) = extra.data;
    Y.labels->insert(Y.labels->end(), extra.labels->begin(), extra.labels->end());
  }
  Y = normalize_profiles(Y, norm);
  // test columns must go through the same normalization the SVM was
  // trained behind
  for (BScan& scan : test_scans) {
    ProfileMatrix pm;
    pm.data = scan.data;
    scan.data = normalize_profiles(pm, norm).data;
  }
  note(opt, "training profiles: " + std::to_string(Y.count()));

  const auto grid = parse_svm_grid(cfg);
  const int folds = cfg.value("svm", json::object()).value("folds", 5);
  const WindowConfig window = parse_window(cfg);

  std::map<std::string, MethodOutcome> outcomes;
  for (const std::string method : {"ksvd", "odl"}) {
    // per-method sections override the shared "dict" base; the coder itself
    // is fixed per trainer (K-SVD: OMP, ODL: LARS-LASSO)
    json dj = cfg.value("dict", json::object());
    if (cfg.contains(method)) dj.update(cfg.at(method));
    DictLearnConfig dc = parse_dict(dj);
    dc.coding.method = method == "ksvd" ? CodingMethod::kOmp : CodingMethod::kLarsLasso;

    MethodOutcome& out = outcomes[method];
    auto [D, rep] = train_dictionary(method, Y, dc, gseed);
    out.learn_seconds = rep.wall_time_coding + rep.wall_time_update;
    out.update_seconds = rep.wall_time_update;
    note(opt, method + ": dictionary trained, objective " +
                  std::to_string(rep.objective_trace.back()));

    auto t0 = std::chrono::steady_clock::now();
    std::vector<SparseCode> codes = batch_encode(D, Y, dc.coding);
    out.encode_seconds = seconds_since(t0);
    out.mean_sparsity = mean_sparsity(codes);

    ProfileMatrix feats = codes_to_features(D, Y, codes);
    CvResult cv = cross_validate(feats.data, *feats.labels, grid, folds,
                                 stage_seed(gseed, "svm-cv:" + method));
    RbfSvmModel model = svm_train(feats.data, *feats.labels, cv.best_C, cv.best_gamma);
    out.best_C = cv.best_C;
    out.best_gamma = cv.best_gamma;
    note(opt, method + ": svm C=" + std::to_string(cv.best_C) +
                  " gamma=" + std::to_string(cv.best_gamma));

    for (std::size_t s = 0; s < test_scans.size(); ++s) {
      t0 = std::chrono::steady_clock::now();
      ClassMap map = classify_bscan(test_scans[s], D, dc.coding, model, window);
      out.classify_seconds += seconds_since(t0);
      PccReport report = pcc(map, rebin_truth(test_truths[s], window));
      for (const PccEntry& e : report.entries) {
        out.total[static_cast<std::size_t>(e.class_id)] += e.total_pixels;
        out.correct[static_cast<std::size_t>(e.class_id)] += e.correct_pixels;
      }
    }
    const fs::path odir(opt.out_dir);
    save_dictionary(D, odir / ("dictionary_" + method + ".sptr"),
                    json{{"method", method}, {"seed", gseed}});
    save_svm_model(model, odir / ("model_" + method + ".sptr"));
  }

  json methods;
  for (const auto& [method, o] : outcomes) {
    json pcc_json;
    for (int c = 0; c < 4; ++c)
      pcc_json[class_name(static_cast<ClassId>(c))] = o.pcc_of(c);
    methods[method] = json{{"learn_seconds", o.learn_seconds},
                           {"update_seconds", o.update_seconds},
                           {"encode_seconds", o.encode_seconds},
                           {"classify_seconds", o.classify_seconds},
                           {"mean_sparsity", o.mean_sparsity},
                           {"svm", json{{"C", o.best_C}, {"gamma", o.best_gamma}}},
                           {"pcc", pcc_json}};
  }
  const fs::path out(opt.out_dir);
  write_json(json{{"seed", gseed}, {"methods", methods}}, out / "benchmark.json");

  // Table-2-shaped P_CC table: one row per method, one column per class
  std::ofstream csv(out / "benchmark.csv");
  if (!csv) throw DataError("cannot open for writing: " + (out / "benchmark.csv").string());
  csv << "method";
  for (int c = 0; c < 4; ++c) csv << ',' << class_name(static_cast<ClassId>(c));
  csv << '\n';
  csv.precision(17);
  for (const auto& [method, o] : outcomes) {
    csv << method;
    for (int c = 0; c < 4; ++c) csv << ',' << o.pcc_of(c);
    csv << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse dictionary learning toolkit for GPR range profiles"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--config", opt.config_path, "JSON pipeline configuration");
  app.add_option("--out", opt.out_dir, "output directory (created if missing)");
  app.add_option("--seed", opt.seed, "global seed, overrides config")
      ->each([&](const std::string&) { opt.seed_given = true; });
  app.add_option("--method", opt.method, "dictionary trainer: ksvd or odl")
      ->check(CLI::IsMember({"ksvd", "odl"}));
  app.add_flag("--verbose", opt.verbose, "progress notes on stderr");

  CLI::App* generate = app.add_subcommand("generate", "render a synthetic B-scan + truth");
  CLI::App* train_dict = app.add_subcommand("train-dict", "learn a dictionary from profiles");
  train_dict->add_option("--data", opt.data, "training profile container");
  CLI::App* encode = app.add_subcommand("encode", "sparse-code profiles over a dictionary");
  encode->add_option("--dict", opt.dict, "dictionary container");
  encode->add_option("--data", opt.data, "profile container");
  CLI::App* analyze = app.add_subcommand("analyze", "similarity statistics parameter sweep");
  analyze->add_option("--data", opt.data, "training profile container");
  CLI::App* train_svm = app.add_subcommand("train-svm", "cross-validated RBF-SVM training");
  train_svm->add_option("--features", opt.features, "labeled feature container");
  CLI::App* classify = app.add_subcommand("classify", "pixel classification map of a B-scan");
  classify->add_option("--dict", opt.dict, "dictionary container");
  classify->add_option("--model", opt.model, "SVM model container");
  classify->add_option("--bscan", opt.bscan, "B-scan container");
  CLI::App* evaluate = app.add_subcommand("evaluate", "halo-based P_CC of a class map");
  evaluate->add_option("--map", opt.map, "class map CSV");
  evaluate->add_option("--truth", opt.truth, "scene truth container");
  CLI::App* benchmark = app.add_subcommand("benchmark", "ODL vs K-SVD end-to-end comparison");

  try {
    app.parse(argc, argv);
    const json cfg = load_config(opt);
    std::filesystem::create_directories(opt.out_dir);

    if (*generate) cmd_generate(cfg, opt);
    else if (*train_dict) cmd_train_dict(cfg, opt);
    else if (*encode) cmd_encode(cfg, opt);
    else if (*analyze) cmd_analyze(cfg, opt);
    else if (*train_svm) cmd_train_svm(cfg, opt);
    else if (*classify) cmd_classify(cfg, opt);
    else if (*evaluate) cmd_evaluate(cfg, opt);
    else if (*benchmark) cmd_benchmark(cfg, opt);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "gprdl: " << e.what() << '\n';
    return 1;
  } catch (const FormatError& e) {
    std::cerr << "gprdl: " << e.what() << '\n';
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "gprdl: " << e.what() << '\n';
    return 3;
  } catch (const AnalysisError& e) {
    std::cerr << "gprdl: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {  // DataError, InputError
    std::cerr << "gprdl: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gprdl: " << e.what() << '\n';
    return 2;
  }
}
