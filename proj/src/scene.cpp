#include "gprdl/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace gprdl {

double ricker(double t, double center_freq) {
  const double a = std::numbers::pi * center_freq * t;
  const double a2 = a * a;
  return (1.0 - 2.0 * a2) * std::exp(-a2);
}

double ricker_half_duration(double center_freq) {
  // The wavelet has decayed below ~1e-3 of its peak by sqrt(6)/(pi*f).
  return std::sqrt(6.0) / (std::numbers::pi * center_freq);
}

namespace {

void validate(const SyntheticSceneConfig& c) {
  if (c.n_positions <= 0 || c.n_samples < 2)
    throw ConfigError("scene config: n_positions must be > 0 and n_samples >= 2");
  if (c.dt <= 0 || c.dx <= 0) throw ConfigError("scene config: dt and dx must be > 0");
  if (c.wave_velocity <= 0) throw ConfigError("scene config: wave_velocity must be > 0");
  if (c.wavelet_center_freq <= 0)
    throw ConfigError("scene config: wavelet_center_freq must be > 0");
  if (c.clutter_std < 0 || c.clutter_corr_length <= 0)
    throw ConfigError("scene config: clutter parameters out of range");
  for (const auto& t : c.targets) {
    if (!std::isfinite(t.reflectivity)) throw ConfigError("scene config: non-finite reflectivity");
    if (t.depth <= 0 || t.radius <= 0)
      throw ConfigError("scene config: target depth and radius must be > 0");
    if (t.class_id == ClassId::kClutter)
      throw ConfigError("scene config: target class must be a mine class");
  }
}

// Correlated clutter: white Gaussian field smoothed along the scan axis with
// a Gaussian kernel whose FWHM is corr_length/dx columns. The kernel is
// l2-normalized so the per-pixel standard deviation stays clutter_std.
Matrix correlated_clutter(int m, int L, double std_dev, double corr_cols,
                          std::mt19937_64& rng) {
  Matrix white(m, L);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int j = 0; j < L; ++j)
    for (int i = 0; i < m; ++i) white(i, j) = gauss(rng);

  const double sigma = corr_cols / 2.354820045;  // FWHM -> Gaussian sigma
  const int half = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  Eigen::VectorXd kernel(2 * half + 1);
  for (int k = -half; k <= half; ++k)
    kernel(k + half) = std::exp(-0.5 * (k / sigma) * (k / sigma));
  kernel /= kernel.norm();

  Matrix out = Matrix::Zero(m, L);
  for (int j = 0; j < L; ++j) {
    for (int k = -half; k <= half; ++k) {
      const int src = j + k;
      if (src < 0 || src >= L) continue;
      out.col(j) += kernel(k + half) * white.col(src);
    }
  }
  return out * std_dev;
}

}  // namespace

std::pair<BScan, SceneTruth> generate_synthetic_bscan(const SyntheticSceneConfig& config) {
  validate(config);
  const int m = config.n_samples;
  const int L = config.n_positions;
  const double v = config.wave_velocity;

  BScan scan;
  scan.data = Matrix::Zero(m, L);
  scan.dt = config.dt;
  scan.dx = config.dx;

  SceneTruth truth;
  truth.labels = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>::Zero(m, L);

  const double half_dur = ricker_half_duration(config.wavelet_center_freq);

  for (const auto& tgt : config.targets) {
    const double t0 = 2.0 * tgt.depth / v;  // apex two-way delay
    for (int j = 0; j < L; ++j) {
      const double x = j * config.dx;
      const double off = x - tgt.x0;
      const double tx = (2.0 / v) * std::sqrt(tgt.depth * tgt.depth + off * off);
      const double amp = tgt.reflectivity / std::max(tx, t0);
      for (int i = 0; i < m; ++i) {
        const double t = i * config.dt - tx;
        if (std::abs(t) > half_dur) continue;
        scan.data(i, j) += amp * ricker(t, config.wavelet_center_freq);
      }
    }
    // Halo: rectangle around the apex, one wavelet footprint beyond the
    // target extent in both position and delay.
    const double x_margin = tgt.radius + half_dur * v / 2.0;
    const double t_margin = half_dur + 2.0 * tgt.radius / v;
    const int j_lo = std::max(0, static_cast<int>(std::floor((tgt.x0 - x_margin) / config.dx)));
    const int j_hi = std::min(L - 1, static_cast<int>(std::ceil((tgt.x0 + x_margin) / config.dx)));
    const int i_lo = std::max(0, static_cast<int>(std::floor((t0 - t_margin) / config.dt)));
    const int i_hi = std::min(m - 1, static_cast<int>(std::ceil((t0 + t_margin) / config.dt)));
    for (int j = j_lo; j <= j_hi; ++j)
      for (int i = i_lo; i <= i_hi; ++i)
        if (truth.labels(i, j) == 0) truth.labels(i, j) = static_cast<int>(tgt.class_id);
  }

  if (config.surface_ringing_amp != 0.0) {
    const double f = config.wavelet_center_freq;
    Eigen::VectorXd ring(m);
    for (int i = 0; i < m; ++i) {
      const double t = i * config.dt;
      ring(i) = config.surface_ringing_amp * std::exp(-t * f / 3.0) *
                std::cos(2.0 * std::numbers::pi * f * t);
    }
    scan.data.colwise() += ring;
  }

  if (config.clutter_std > 0.0) {
    std::mt19937_64 rng(config.seed);
    scan.data += correlated_clutter(m, L, config.clutter_std,
                                    config.clutter_corr_length / config.dx, rng);
  }

  return {std::move(scan), std::move(truth)};
}

ProfileMatrix extract_training_profiles(const std::vector<BScan>& scans,
                                        const std::vector<SceneTruth>& truths,
                                        int per_scan_count, bool near_target_only,
                                        std::uint64_t seed) {
  if (scans.size() != truths.size())
    throw InputError("extract_training_profiles: scans and truths differ in count");
  if (scans.empty()) throw DataError("extract_training_profiles: no scans");
  if (per_scan_count <= 0) throw InputError("extract_training_profiles: count must be > 0");

  const Eigen::Index m = scans.front().n_samples();
  std::mt19937_64 rng(seed);

  std::vector<Eigen::VectorXd> cols;
  std::vector<int> labels;
  for (std::size_t s = 0; s < scans.size(); ++s) {
    const BScan& scan = scans[s];
    const SceneTruth& truth = truths[s];
    if (scan.n_samples() != m)
      throw DataError("extract_training_profiles: scans have unequal profile lengths");
    if (truth.rows() != scan.n_samples() || truth.cols() != scan.n_positions())
      throw DataError("extract_training_profiles: truth grid does not match scan");

    std::vector<Eigen::Index> candidates;
    for (Eigen::Index j = 0; j < scan.n_positions(); ++j)
      if (!near_target_only || truth.column_in_halo(j)) candidates.push_back(j);
    if (candidates.empty())
      throw DataError("extract_training_profiles: scan " + std::to_string(s) +
                      " has no candidate columns");
    if (per_scan_count > static_cast<int>(candidates.size()))
      throw DataError("extract_training_profiles: scan " + std::to_string(s) + " has only " +
                      std::to_string(candidates.size()) + " candidates, " +
                      std::to_string(per_scan_count) + " requested");

    // Partial Fisher-Yates over the candidate list.
    for (int k = 0; k < per_scan_count; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, candidates.size() - 1);
      std::swap(candidates[k], candidates[pick(rng)]);
      const Eigen::Index j = candidates[k];
      cols.push_back(scan.data.col(j));
      labels.push_back(static_cast<int>(truth.column_class(j)));
    }
  }

  ProfileMatrix pm;
  pm.data.resize(m, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) pm.data.col(static_cast<Eigen::Index>(i)) = cols[i];
  pm.labels = std::move(labels);
  return pm;
}

ProfileMatrix normalize_profiles(const ProfileMatrix& pm, NormalizeMode mode) {
  ProfileMatrix out = pm;
  if (mode == NormalizeMode::kNone) return out;
  for (Eigen::Index j = 0; j < out.data.cols(); ++j) {
    auto col = out.data.col(j);
    if (mode == NormalizeMode::kUnitL2) {
      const double norm = col.norm();
      if (norm == 0.0)
        throw DataError("normalize_profiles: column " + std::to_string(j) + " is all-zero");
      col /= norm;
    } else {
      const double mean = col.mean();
      col.array() -= mean;
      const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(col.size() - 1));
      if (sd == 0.0)
        throw DataError("normalize_profiles: column " + std::to_string(j) + " has zero std");
      col /= sd;
    }
  }
  return out;
}

}  // namespace gprdl
