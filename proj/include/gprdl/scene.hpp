#ifndef GPRDL_SCENE_HPP
#define GPRDL_SCENE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gprdl/core.hpp"

namespace gprdl {

enum class ClassId : int {
  kClutter = 0,
  kMineLarge = 1,
  kMineMedium = 2,
  kMineSmall = 3,
};

inline const char* class_name(ClassId c) {
  switch (c) {
    case ClassId::kClutter: return "clutter";
    case ClassId::kMineLarge: return "mine_large";
    case ClassId::kMineMedium: return "mine_medium";
    case ClassId::kMineSmall: return "mine_small";
  }
  return "unknown";
}

// One range profile: the time series recorded at a single antenna position.
struct AScan {
  Vector samples;   // length m, m >= 2
  double dt = 25e-12;  // sample interval [s]
};

// B-scan: A-scans stacked along the scan direction. Stored as an m x L
// matrix, one A-scan per column.
struct BScan {
  Matrix data;      // m x L
  double dt = 25e-12;
  double dx = 0.01;  // spatial step [m]
  std::map<std::string, std::string> metadata;

  Eigen::Index n_samples() const { return data.rows(); }
  Eigen::Index n_positions() const { return data.cols(); }
  AScan column(Eigen::Index i) const { return AScan{data.col(i), dt}; }
};

// Ground-truth halo labels on the full (sample x position) pixel grid.
// Mine halos are mutually disjoint; everything outside them is clutter.
struct SceneTruth {
  // label(i, j) = class id of pixel (sample i, position j); 0 = clutter.
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> labels;

  Eigen::Index rows() const { return labels.rows(); }
  Eigen::Index cols() const { return labels.cols(); }

  bool column_in_halo(Eigen::Index j) const {
    for (Eigen::Index i = 0; i < labels.rows(); ++i)
      if (labels(i, j) != 0) return true;
    return false;
  }
  // Dominant mine class of a column (lowest class id wins on overlap-free
  // grids this is unique); clutter if the column touches no halo.
  ClassId column_class(Eigen::Index j) const {
    for (Eigen::Index i = 0; i < labels.rows(); ++i)
      if (labels(i, j) != 0) return static_cast<ClassId>(labels(i, j));
    return ClassId::kClutter;
  }
};

struct TargetSpec {
  double x0 = 0.5;          // apex position along the scan [m]
  double depth = 0.10;      // burial depth [m]
  double radius = 0.05;     // target radius [m]
  double reflectivity = 1.0;
  ClassId class_id = ClassId::kMineMedium;
};

struct SyntheticSceneConfig {
  int n_positions = 100;
  int n_samples = 512;
  std::vector<TargetSpec> targets;
  double dt = 25e-12;            // [s]
  double dx = 0.01;              // [m]
  double wave_velocity = 1e8;    // [m/s], ~c/3 for moist sandy soil
  double wavelet_center_freq = 2e9;  // [Hz]
  double clutter_std = 0.0;
  double clutter_corr_length = 0.20;  // [m]
  double surface_ringing_amp = 0.0;
  std::uint64_t seed = 0;
};

// Training/test matrix Y: profiles as columns, optional per-column class id.
struct ProfileMatrix {
  Matrix data;  // m x L
  std::optional<std::vector<int>> labels;

  Eigen::Index m() const { return data.rows(); }
  Eigen::Index count() const { return data.cols(); }
};

enum class NormalizeMode { kNone, kUnitL2, kZScore };

// Ricker wavelet (second derivative of a Gaussian), amplitude 1 at t = 0.
double ricker(double t, double center_freq);

// Effective half-duration of the Ricker wavelet [s]; used for halo sizing.
double ricker_half_duration(double center_freq);

// Renders targets as hyperbolic Ricker signatures with 1/t spreading loss,
// plus spatially correlated Gaussian clutter and a per-column-identical
// decaying surface ring. Pure function of the config (seed included).
std::pair<BScan, SceneTruth> generate_synthetic_bscan(const SyntheticSceneConfig& config);

// Draws per_scan_count distinct columns per scan, uniformly at random.
// With near_target_only, candidates are restricted to columns intersecting
// a mine halo. Labels come from the truth grids.
ProfileMatrix extract_training_profiles(const std::vector<BScan>& scans,
                                        const std::vector<SceneTruth>& truths,
                                        int per_scan_count, bool near_target_only,
                                        std::uint64_t seed);

ProfileMatrix normalize_profiles(const ProfileMatrix& pm, NormalizeMode mode);

}  // namespace gprdl

#endif
