#ifndef GPRDL_SVM_HPP
#define GPRDL_SVM_HPP

#include <cstdint>
#include <vector>

#include "gprdl/core.hpp"

namespace gprdl {

// One-vs-rest RBF-kernel SVM. Features are scaled per-dimension to [-1, 1]
// using the training-set extremes stored in the model; support vectors are
// kept in scaled space.
struct RbfSvmModel {
  struct Binary {
    int class_id = 0;
    Matrix support_vectors;  // dim x nsv, scaled
    Vector coefficients;     // signed dual coefficients alpha_i * y_i
    double bias = 0.0;
  };

  std::vector<int> classes;  // ascending
  std::vector<Binary> binaries;
  Vector scale_lo, scale_hi;  // per-dimension training extremes
  double C = 1.0;
  double gamma = 1.0;

  Eigen::Index dim() const { return scale_lo.size(); }
  Vector scale(const Vector& feature) const;
  // Decision value of one binary subproblem on a scaled feature.
  double decision(const Binary& b, const Vector& scaled) const;
};

// Soft-margin binary subproblems solved by sequential minimal optimization
// (maximal-violating-pair working set selection) to KKT tolerance tol.
// features: dim x N, one sample per column.
RbfSvmModel svm_train(const Matrix& features, const std::vector<int>& labels, double C,
                      double gamma, double tol = 1e-3);

int svm_predict(const RbfSvmModel& model, const Vector& feature);

struct CvResult {
  double best_C = 0.0;
  double best_gamma = 0.0;
  std::vector<double> mean_accuracy;  // one per grid point, grid order
};

// Stratified nu-fold cross-validation over an RBF parameter grid. Ties in
// mean accuracy break toward smaller C, then smaller gamma.
CvResult cross_validate(const Matrix& features, const std::vector<int>& labels,
                        const std::vector<std::pair<double, double>>& grid, int nu,
                        std::uint64_t seed, double tol = 1e-3);

}  // namespace gprdl

#endif
