#ifndef GPRDL_LEARN_HPP
#define GPRDL_LEARN_HPP

#include <cstdint>
#include <vector>

#include "gprdl/coding.hpp"
#include "gprdl/core.hpp"
#include "gprdl/scene.hpp"

namespace gprdl {

enum class DictInit { kRandomColumns, kRandomGaussian };

struct DictLearnConfig {
  int n_atoms = 512;
  int iterations = 40;
  CodingParams coding;
  DictInit init = DictInit::kRandomColumns;
  std::uint64_t seed = 0;
  // ODL forgetting factor applied to the sufficient statistics before each
  // draw; 1.0 (the default) keeps plain cumulative sums.
  double decay = 1.0;
};

struct LearnReport {
  std::vector<double> objective_trace;  // ||Y - DX||_F per iteration
  double wall_time_coding = 0.0;        // seconds
  double wall_time_update = 0.0;        // seconds
  int replaced_atoms = 0;
};

Dictionary init_dictionary(const ProfileMatrix& Y, int n_atoms, DictInit strategy,
                           std::uint64_t seed);

// Batch K-SVD: alternates an OMP coding pass over all columns with a
// sequential per-atom rank-1 update (leading singular pair of the restricted
// residual). Atoms selected by no sample are replaced by the normalized
// worst-represented training column.
std::pair<Dictionary, LearnReport> ksvd_train(const ProfileMatrix& Y,
                                              const DictLearnConfig& config);

// Online dictionary learning: streams uniformly drawn training columns,
// codes each with LARS-LASSO, accumulates sufficient statistics A and B,
// and refreshes the dictionary with one block-coordinate-descent sweep per
// draw. T is counted in full-dataset-equivalent passes (T*L draws total);
// the objective is sampled on the full training set every L draws.
std::pair<Dictionary, LearnReport> odl_train(const ProfileMatrix& Y,
                                             const DictLearnConfig& config);

// Frobenius norm of Y - DX for the given code list.
double objective(const Dictionary& D, const ProfileMatrix& Y,
                 const std::vector<SparseCode>& codes);

}  // namespace gprdl

#endif
