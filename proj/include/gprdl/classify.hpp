#ifndef GPRDL_CLASSIFY_HPP
#define GPRDL_CLASSIFY_HPP

#include <filesystem>
#include <vector>

#include "gprdl/coding.hpp"
#include "gprdl/scene.hpp"
#include "gprdl/svm.hpp"

namespace gprdl {

// Pixel grid for classification maps: one pixel per (depth window, scan
// position). length = 0 means a single window spanning the whole A-scan.
struct WindowConfig {
  int length = 0;
  int stride = 0;  // defaults to length

  int window_length(Eigen::Index m) const {
    return length > 0 ? length : static_cast<int>(m);
  }
  int window_stride(Eigen::Index m) const {
    return stride > 0 ? stride : window_length(m);
  }
  int n_windows(Eigen::Index m) const {
    const int wl = window_length(m), ws = window_stride(m);
    if (wl > m) throw InputError("window longer than profile");
    return 1 + (static_cast<int>(m) - wl) / ws;
  }
};

struct ClassMap {
  // class id per (window row, position column)
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> labels;
};

struct PccEntry {
  int class_id = 0;
  long total_pixels = 0;    // N_t (halo) or N_c (clutter region)
  long correct_pixels = 0;  // N_m or N_d
  double pcc = 0.0;
  bool skipped_empty = false;  // class had no halo pixels in the truth
};

struct PccReport {
  std::vector<PccEntry> entries;  // ascending class id
};

// Ground truth rebinned onto the (window x position) map grid: a map pixel
// takes a mine class when its sample range intersects that class's halo
// (lowest class id wins), clutter otherwise.
ClassMap rebin_truth(const SceneTruth& truth, const WindowConfig& window);

// Sparse-codes each (windowed) sub-profile over D and classifies the dense
// coefficient vector. Equals column-wise encode + predict by construction.
ClassMap classify_bscan(const BScan& scan, const Dictionary& D, const CodingParams& params,
                        const RbfSvmModel& model, const WindowConfig& window = {});

// Halo-based probability of correct classification, per class. Mine
// classes score inside their halo; clutter scores outside all halos.
PccReport pcc(const ClassMap& map, const ClassMap& truth_grid);

void write_classmap_csv(const ClassMap& map, const std::filesystem::path& path);
ClassMap load_classmap_csv(const std::filesystem::path& path);
void write_classmap_sidecar(const std::filesystem::path& path);
void write_pcc_csv(const PccReport& report, const std::filesystem::path& path);

}  // namespace gprdl

#endif
