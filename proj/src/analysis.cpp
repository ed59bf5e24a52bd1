#include "gprdl/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

namespace gprdl {

Ecdf::Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw InputError("ecdf: empty sample set");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

std::vector<double> cross_correlation(const Vector& y, const Vector& yhat) {
  const Eigen::Index m = y.size();
  if (m < 1 || yhat.size() != m)
    throw InputError("cross_correlation: vectors must have equal length >= 1");
  std::vector<double> r(static_cast<std::size_t>(2 * m - 1), 0.0);
  for (Eigen::Index k = -(m - 1); k <= m - 1; ++k) {
    double sum = 0.0;
    const Eigen::Index lo = std::max<Eigen::Index>(0, -k);
    const Eigen::Index hi = std::min(m, m - k);
    for (Eigen::Index i = lo; i < hi; ++i) sum += y(i) * yhat(i + k);
    r[static_cast<std::size_t>(k + m - 1)] = sum;
  }
  return r;
}

double similarity(const Vector& y, const Vector& yhat) {
  const double e1 = y.squaredNorm();
  const double e2 = yhat.squaredNorm();
  if (e1 == 0.0 || e2 == 0.0)
    throw AnalysisError("similarity: undefined for a zero vector");
  const std::vector<double> r = cross_correlation(y, yhat);
  double peak = 0.0;
  for (double v : r) peak = std::max(peak, std::abs(v));
  return peak / std::sqrt(e1 * e2);
}

SimilaritySamples similarity_distribution(const ProfileMatrix& Y, const Dictionary& D,
                                          const CodingParams& params) {
  if (Y.m() != D.m())
    throw InputError("similarity_distribution: profile length does not match dictionary");
  SimilaritySamples out;
  for (Eigen::Index i = 0; i < Y.count(); ++i) {
    const SparseCode code = encode(D, Y.data.col(i), params);
    if (code.nnz() == 0 || Y.data.col(i).squaredNorm() == 0.0) {
      ++out.excluded_columns;
      continue;
    }
    out.values.push_back(similarity(Y.data.col(i), reconstruct(D, code)));
  }
  if (out.values.empty())
    throw AnalysisError("similarity_distribution: every column was excluded (empty codes)");
  return out;
}

std::vector<double> histogram(const std::vector<double>& samples, int n_bins, double lo,
                              double hi) {
  if (samples.empty()) throw InputError("histogram: empty sample set");
  if (n_bins < 1 || !(hi > lo)) throw InputError("histogram: invalid binning");
  std::vector<double> bins(static_cast<std::size_t>(n_bins), 0.0);
  const double width = (hi - lo) / n_bins;
  for (double s : samples) {
    int b = static_cast<int>(std::floor((s - lo) / width));
    b = std::clamp(b, 0, n_bins - 1);
    bins[static_cast<std::size_t>(b)] += 1.0;
  }
  for (double& b : bins) b /= static_cast<double>(samples.size());
  return bins;
}

double coefficient_of_variation(const std::vector<double>& samples) {
  if (samples.size() < 2) throw InputError("coefficient_of_variation: need at least 2 samples");
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  if (mean == 0.0) throw AnalysisError("coefficient_of_variation: zero mean");
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / static_cast<double>(samples.size() - 1));
  return sd / mean;
}

double ks_distance(const Ecdf& p1, const Ecdf& p2) {
  double d = 0.0;
  for (double x : p1.sorted_samples()) d = std::max(d, std::abs(p1(x) - p2(x)));
  for (double x : p2.sorted_samples()) d = std::max(d, std::abs(p1(x) - p2(x)));
  return d;
}

SweepResult parameter_sweep(const ProfileMatrix& Y, const SweepConfig& config) {
  if (config.grid.empty()) throw InputError("parameter_sweep: empty grid");
  if (config.reference_index >= config.grid.size())
    throw InputError("parameter_sweep: reference index outside grid");

  SweepResult result;
  std::vector<std::vector<double>> samples_per_row(config.grid.size());

  for (std::size_t g = 0; g < config.grid.size(); ++g) {
    const SweepPoint& pt = config.grid[g];
    DictLearnConfig lc;
    lc.n_atoms = pt.n_atoms;
    lc.iterations = pt.iterations;
    lc.init = config.init;
    lc.seed = config.seed;  // same stream per point; the grid is the variable
    lc.coding.method = config.method;
    lc.coding.alpha = config.alpha;
    lc.coding.lambda = config.lambda;

    const auto t0 = std::chrono::steady_clock::now();
    Dictionary D;
    try {
      if (config.method == CodingMethod::kOmp)
        D = ksvd_train(Y, lc).first;
      else
        D = odl_train(Y, lc).first;
    } catch (const Error& e) {
      throw AnalysisError("parameter_sweep: training failed at grid point (T=" +
                          std::to_string(pt.iterations) + ", n_atoms=" +
                          std::to_string(pt.n_atoms) + "): " + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    CodingParams cp = lc.coding;
    const SimilaritySamples sim = similarity_distribution(Y, D, cp);

    SweepRow row;
    row.point = pt;
    row.lambda = config.lambda;
    row.alpha = config.alpha;
    row.learn_seconds = secs;
    row.is_reference = g == config.reference_index;
    double mean = 0.0;
    for (double s : sim.values) mean += s;
    mean /= static_cast<double>(sim.values.size());
    row.mean = mean;
    double ss = 0.0;
    for (double s : sim.values) ss += (s - mean) * (s - mean);
    row.stdev = std::sqrt(ss / std::max<std::size_t>(1, sim.values.size() - 1));
    row.cv = mean != 0.0 ? row.stdev / mean : 0.0;
    samples_per_row[g] = sim.values;
    result.rows.push_back(row);
  }

  const Ecdf reference(samples_per_row[config.reference_index]);
  for (std::size_t g = 0; g < result.rows.size(); ++g)
    result.rows[g].ks_vs_reference = ks_distance(Ecdf(samples_per_row[g]), reference);
  return result;
}

void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << "iterations,n_atoms,lambda,alpha,mean,std,cv,ks_vs_reference,learn_seconds,is_reference\n";
  out.precision(17);
  for (const auto& r : result.rows)
    out << r.point.iterations << ',' << r.point.n_atoms << ',' << r.lambda << ',' << r.alpha
        << ',' << r.mean << ',' << r.stdev << ',' << r.cv << ',' << r.ks_vs_reference << ','
        << r.learn_seconds << ',' << (r.is_reference ? 1 : 0) << '\n';
}

void write_histogram_csv(const std::vector<double>& bins, double lo, double hi,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << "bin_lo,bin_hi,mass\n";
  out.precision(17);
  const double width = (hi - lo) / static_cast<double>(bins.size());
  for (std::size_t b = 0; b < bins.size(); ++b)
    out << lo + b * width << ',' << lo + (b + 1) * width << ',' << bins[b] << '\n';
}

}  // namespace gprdl
