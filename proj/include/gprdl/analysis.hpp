#ifndef GPRDL_ANALYSIS_HPP
#define GPRDL_ANALYSIS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gprdl/coding.hpp"
#include "gprdl/core.hpp"
#include "gprdl/learn.hpp"

namespace gprdl {

// Similarity samples s_i in [0, 1] for one (dictionary, coding) choice.
// Columns whose sparse code came back empty have no defined similarity;
// they are excluded and counted instead of silently dropped.
struct SimilaritySamples {
  std::vector<double> values;
  int excluded_columns = 0;
  std::string provenance;
};

// Empirical CDF: P(x) = (#samples <= x) / N over the sorted sample list.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> samples);
  double operator()(double x) const;
  const std::vector<double>& sorted_samples() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

// Full cross-correlation r(k) = sum_n y(n) yhat(n+k), k in [-(m-1), m-1];
// output index k + m - 1.
std::vector<double> cross_correlation(const Vector& y, const Vector& yhat);

// Peak absolute normalized cross-correlation; in [0, 1] by Cauchy-Schwarz.
double similarity(const Vector& y, const Vector& yhat);

SimilaritySamples similarity_distribution(const ProfileMatrix& Y, const Dictionary& D,
                                          const CodingParams& params);

// Normalized histogram (counts sum to 1) over n_bins uniform bins spanning
// [lo, hi]; samples outside the range clamp to the edge bins.
std::vector<double> histogram(const std::vector<double>& samples, int n_bins = 50,
                              double lo = 0.0, double hi = 1.0);

// Sample standard deviation (N-1) over the mean.
double coefficient_of_variation(const std::vector<double>& samples);

// Exact two-sample Kolmogorov-Smirnov statistic over pooled sample points.
double ks_distance(const Ecdf& p1, const Ecdf& p2);

struct SweepPoint {
  int iterations = 1;
  int n_atoms = 128;
};

struct SweepRow {
  SweepPoint point;
  double lambda = 0.0, alpha = 0.0;
  double mean = 0.0, stdev = 0.0, cv = 0.0;
  double ks_vs_reference = 0.0;
  double learn_seconds = 0.0;
  bool is_reference = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // grid order
};

struct SweepConfig {
  std::vector<SweepPoint> grid;
  std::size_t reference_index = 0;  // must address a grid entry
  CodingMethod method = CodingMethod::kLarsLasso;
  double lambda = 0.1;
  double alpha = 0.1;
  DictInit init = DictInit::kRandomColumns;
  std::uint64_t seed = 0;
};

// Trains one dictionary per grid point and reports mean/std/CV of the
// similarity samples plus the K-S distance of each point's ecdf against the
// reference point's.
SweepResult parameter_sweep(const ProfileMatrix& Y, const SweepConfig& config);

void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path);
void write_histogram_csv(const std::vector<double>& bins, double lo, double hi,
                         const std::filesystem::path& path);

}  // namespace gprdl

#endif
