#include "gprdl/classify.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

namespace gprdl {

ClassMap rebin_truth(const SceneTruth& truth, const WindowConfig& window) {
  const Eigen::Index m = truth.rows();
  const int nw = window.n_windows(m);
  const int wl = window.window_length(m);
  const int ws = window.window_stride(m);

  ClassMap out;
  out.labels.setZero(nw, truth.cols());
  for (int w = 0; w < nw; ++w) {
    const int lo = w * ws;
    for (Eigen::Index j = 0; j < truth.cols(); ++j) {
      int label = 0;
      for (int i = lo; i < lo + wl; ++i) {
        const int t = truth.labels(i, j);
        if (t != 0 && (label == 0 || t < label)) label = t;
      }
      out.labels(w, j) = label;
    }
  }
  return out;
}

ClassMap classify_bscan(const BScan& scan, const Dictionary& D, const CodingParams& params,
                        const RbfSvmModel& model, const WindowConfig& window) {
  const Eigen::Index m = scan.n_samples();
  const int wl = window.window_length(m);
  if (wl != D.m())
    throw InputError("classify_bscan: window length " + std::to_string(wl) +
                     " does not match dictionary profile length " + std::to_string(D.m()));
  if (model.dim() != D.n())
    throw InputError("classify_bscan: model feature dimension does not match dictionary");

  const int nw = window.n_windows(m);
  const int ws = window.window_stride(m);
  ClassMap map;
  map.labels.resize(nw, scan.n_positions());
  for (Eigen::Index j = 0; j < scan.n_positions(); ++j) {
    for (int w = 0; w < nw; ++w) {
      const Vector sub = scan.data.col(j).segment(w * ws, wl);
      const SparseCode code = encode(D, sub, params);
      map.labels(w, j) = svm_predict(model, code.dense());
    }
  }
  return map;
}

PccReport pcc(const ClassMap& map, const ClassMap& truth_grid) {
  if (map.labels.rows() != truth_grid.labels.rows() ||
      map.labels.cols() != truth_grid.labels.cols())
    throw InputError("pcc: map and truth grids are not congruent");

  // always report the full class roster so reports across scenes line up
  std::set<int> classes = {0, 1, 2, 3};
  for (Eigen::Index i = 0; i < truth_grid.labels.rows(); ++i)
    for (Eigen::Index j = 0; j < truth_grid.labels.cols(); ++j)
      classes.insert(truth_grid.labels(i, j));

  PccReport report;
  for (int cls : classes) {
    PccEntry e;
    e.class_id = cls;
    for (Eigen::Index i = 0; i < truth_grid.labels.rows(); ++i)
      for (Eigen::Index j = 0; j < truth_grid.labels.cols(); ++j) {
        if (truth_grid.labels(i, j) != cls) continue;
        ++e.total_pixels;
        if (map.labels(i, j) == cls) ++e.correct_pixels;
      }
    if (e.total_pixels == 0) {
      e.skipped_empty = true;
    } else {
      e.pcc = static_cast<double>(e.correct_pixels) / static_cast<double>(e.total_pixels);
    }
    report.entries.push_back(e);
  }
  return report;
}

void write_classmap_csv(const ClassMap& map, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  for (Eigen::Index i = 0; i < map.labels.rows(); ++i) {
    for (Eigen::Index j = 0; j < map.labels.cols(); ++j) {
      if (j) out << ',';
      out << map.labels(i, j);
    }
    out << '\n';
  }
}

ClassMap load_classmap_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open for reading: " + path.string());
  std::vector<std::vector<int>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<int> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stoi(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw FormatError(path.string() + ": ragged class map CSV", 0);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(path.string() + ": empty class map CSV", 0);
  ClassMap map;
  map.labels.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      map.labels(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return map;
}

void write_classmap_sidecar(const std::filesystem::path& path) {
  nlohmann::json names;
  for (int c : {0, 1, 2, 3}) names[std::to_string(c)] = class_name(static_cast<ClassId>(c));
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << names.dump(2) << '\n';
}

void write_pcc_csv(const PccReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << "class_id,class_name,total_pixels,correct_pixels,pcc,skipped_empty\n";
  out.precision(17);
  for (const auto& e : report.entries)
    out << e.class_id << ',' << class_name(static_cast<ClassId>(e.class_id)) << ','
        << e.total_pixels << ',' << e.correct_pixels << ',' << e.pcc << ','
        << (e.skipped_empty ? 1 : 0) << '\n';
}

}  // namespace gprdl
