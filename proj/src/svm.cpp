#include "gprdl/svm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace gprdl {

namespace {

// Binary soft-margin SMO on +-1 labels with a precomputed kernel matrix.
// Returns (alpha, bias).
std::pair<Vector, double> smo_solve(const Matrix& K, const std::vector<double>& y, double C,
                                    double tol) {
  const int N = static_cast<int>(y.size());
  Vector alpha = Vector::Zero(N);
  // Gradient of the dual objective: grad_i = y_i * f(x_i) - 1 at alpha.
  Vector grad = Vector::Constant(N, -1.0);

  const int max_iter = 100000;
  for (int iter = 0; iter < max_iter; ++iter) {
    // Maximal violating pair (Keerthi et al. / libsvm WSS1).
    int i = -1, j = -1;
    double g_max = -1e300, g_min = 1e300;
    for (int t = 0; t < N; ++t) {
      if ((y[t] > 0 && alpha(t) < C) || (y[t] < 0 && alpha(t) > 0)) {
        const double v = -y[t] * grad(t);
        if (v > g_max) {
          g_max = v;
          i = t;
        }
      }
      if ((y[t] > 0 && alpha(t) > 0) || (y[t] < 0 && alpha(t) < C)) {
        const double v = -y[t] * grad(t);
        if (v < g_min) {
          g_min = v;
          j = t;
        }
      }
    }
    if (i < 0 || j < 0 || g_max - g_min < tol) break;

    // Analytic two-variable update.
    const double yi = y[i], yj = y[j];
    double eta = K(i, i) + K(j, j) - 2.0 * K(i, j);
    if (eta <= 0) eta = 1e-12;
    const double delta = (g_max - g_min) / eta;

    double ai = alpha(i), aj = alpha(j);
    // Move along the feasible direction (d_i = y_i, d_j = -y_j) by step t.
    double step = delta;
    const double max_i = yi > 0 ? C - ai : ai;
    const double max_j = yj > 0 ? aj : C - aj;
    step = std::min(step, std::min(max_i, max_j));
    if (step <= 0) break;

    alpha(i) = ai + yi * step;
    alpha(j) = aj - yj * step;
    // Clamp against round-off.
    alpha(i) = std::clamp(alpha(i), 0.0, C);
    alpha(j) = std::clamp(alpha(j), 0.0, C);

    const double dai = alpha(i) - ai, daj = alpha(j) - aj;
    for (int t = 0; t < N; ++t)
      grad(t) += y[t] * (K(t, i) * y[i] * dai + K(t, j) * y[j] * daj);
  }

  // Bias from the free support vectors, midpoint fallback otherwise.
  double sum = 0.0;
  int free_count = 0;
  for (int t = 0; t < N; ++t) {
    if (alpha(t) > 1e-12 && alpha(t) < C - 1e-12) {
      sum += -y[t] * grad(t);
      ++free_count;
    }
  }
  double bias;
  if (free_count > 0) {
    bias = sum / free_count;
  } else {
    double ub = 1e300, lb = -1e300;
    for (int t = 0; t < N; ++t) {
      const double v = -y[t] * grad(t);
      if ((y[t] > 0 && alpha(t) < C) || (y[t] < 0 && alpha(t) > 0)) lb = std::max(lb, v);
      if ((y[t] > 0 && alpha(t) > 0) || (y[t] < 0 && alpha(t) < C)) ub = std::min(ub, v);
    }
    bias = (lb + ub) / 2.0;
  }
  return {std::move(alpha), bias};
}

}  // namespace

Vector RbfSvmModel::scale(const Vector& feature) const {
  if (feature.size() != dim()) throw InputError("svm: feature dimension mismatch");
  Vector out(feature.size());
  for (Eigen::Index d = 0; d < feature.size(); ++d) {
    const double span = scale_hi(d) - scale_lo(d);
    out(d) = span > 0 ? -1.0 + 2.0 * (feature(d) - scale_lo(d)) / span : 0.0;
  }
  return out;
}

double RbfSvmModel::decision(const Binary& b, const Vector& scaled) const {
  double sum = b.bias;
  for (Eigen::Index k = 0; k < b.support_vectors.cols(); ++k) {
    const double d2 = (scaled - b.support_vectors.col(k)).squaredNorm();
    sum += b.coefficients(k) * std::exp(-gamma * d2);
  }
  return sum;
}

RbfSvmModel svm_train(const Matrix& features, const std::vector<int>& labels, double C,
                      double gamma, double tol) {
  const int N = static_cast<int>(features.cols());
  if (N == 0 || static_cast<int>(labels.size()) != N)
    throw InputError("svm_train: labels must match sample count");
  if (!features.allFinite()) throw InputError("svm_train: non-finite feature");
  if (C <= 0 || gamma <= 0) throw ConfigError("svm_train: C and gamma must be > 0");

  std::set<int> class_set(labels.begin(), labels.end());
  if (class_set.size() < 2) throw DataError("svm_train: need at least two classes");

  RbfSvmModel model;
  model.classes.assign(class_set.begin(), class_set.end());
  model.C = C;
  model.gamma = gamma;
  model.scale_lo = features.rowwise().minCoeff();
  model.scale_hi = features.rowwise().maxCoeff();

  Matrix scaled(features.rows(), N);
  for (int i = 0; i < N; ++i) scaled.col(i) = model.scale(features.col(i));

  // Kernel matrix shared across the one-vs-rest subproblems.
  Matrix K(N, N);
  for (int i = 0; i < N; ++i) {
    K(i, i) = 1.0;
    for (int j = i + 1; j < N; ++j) {
      const double k = std::exp(-gamma * (scaled.col(i) - scaled.col(j)).squaredNorm());
      K(i, j) = k;
      K(j, i) = k;
    }
  }

  for (int cls : model.classes) {
    std::vector<double> y(N);
    for (int i = 0; i < N; ++i) y[i] = labels[i] == cls ? 1.0 : -1.0;
    auto [alpha, bias] = smo_solve(K, y, C, tol);

    RbfSvmModel::Binary bin;
    bin.class_id = cls;
    bin.bias = bias;
    std::vector<int> sv;
    for (int i = 0; i < N; ++i)
      if (alpha(i) > 1e-12) sv.push_back(i);
    bin.support_vectors.resize(features.rows(), static_cast<Eigen::Index>(sv.size()));
    bin.coefficients.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t k = 0; k < sv.size(); ++k) {
      bin.support_vectors.col(static_cast<Eigen::Index>(k)) = scaled.col(sv[k]);
      bin.coefficients(static_cast<Eigen::Index>(k)) = alpha(sv[k]) * y[sv[k]];
    }
    model.binaries.push_back(std::move(bin));
  }
  return model;
}

int svm_predict(const RbfSvmModel& model, const Vector& feature) {
  if (!feature.allFinite()) throw InputError("svm_predict: non-finite feature");
  const Vector scaled = model.scale(feature);
  int best = model.classes.front();
  double best_val = -1e300;
  for (const auto& bin : model.binaries) {
    const double v = model.decision(bin, scaled);
    if (v > best_val) {  // ties break toward the lowest class id (storage order)
      best_val = v;
      best = bin.class_id;
    }
  }
  return best;
}

CvResult cross_validate(const Matrix& features, const std::vector<int>& labels,
                        const std::vector<std::pair<double, double>>& grid, int nu,
                        std::uint64_t seed, double tol) {
  const int N = static_cast<int>(features.cols());
  if (grid.empty()) throw ConfigError("cross_validate: empty parameter grid");
  if (nu < 2) throw ConfigError("cross_validate: nu must be >= 2");
  if (static_cast<int>(labels.size()) != N)
    throw InputError("cross_validate: labels must match sample count");

  // Stratified folds: per class, shuffle then deal round-robin.
  std::vector<int> fold(N, -1);
  std::set<int> class_set(labels.begin(), labels.end());
  std::mt19937_64 rng(seed);
  for (int cls : class_set) {
    std::vector<int> idx;
    for (int i = 0; i < N; ++i)
      if (labels[i] == cls) idx.push_back(i);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t k = 0; k < idx.size(); ++k) fold[idx[k]] = static_cast<int>(k % nu);
  }

  // Every training split must retain at least two classes.
  for (int f = 0; f < nu; ++f) {
    std::set<int> train_classes;
    for (int i = 0; i < N; ++i)
      if (fold[i] != f) train_classes.insert(labels[i]);
    if (train_classes.size() < 2)
      throw DataError("cross_validate: fold " + std::to_string(f) +
                      " leaves fewer than two classes for training");
  }

  CvResult result;
  result.mean_accuracy.assign(grid.size(), 0.0);
  double best_acc = -1.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto [C, gamma] = grid[g];
    double acc_sum = 0.0;
    int fold_count = 0;
    for (int f = 0; f < nu; ++f) {
      std::vector<int> train_idx, val_idx;
      for (int i = 0; i < N; ++i) (fold[i] == f ? val_idx : train_idx).push_back(i);
      if (val_idx.empty()) continue;
      Matrix ft(features.rows(), static_cast<Eigen::Index>(train_idx.size()));
      std::vector<int> lt(train_idx.size());
      for (std::size_t k = 0; k < train_idx.size(); ++k) {
        ft.col(static_cast<Eigen::Index>(k)) = features.col(train_idx[k]);
        lt[k] = labels[train_idx[k]];
      }
      RbfSvmModel model = svm_train(ft, lt, C, gamma, tol);
      int correct = 0;
      for (int i : val_idx)
        if (svm_predict(model, features.col(i)) == labels[i]) ++correct;
      acc_sum += static_cast<double>(correct) / static_cast<double>(val_idx.size());
      ++fold_count;
    }
    const double mean_acc = acc_sum / fold_count;
    result.mean_accuracy[g] = mean_acc;
    const bool better =
        mean_acc > best_acc + 1e-15 ||
        (std::abs(mean_acc - best_acc) <= 1e-15 &&
         (C < result.best_C || (C == result.best_C && gamma < result.best_gamma)));
    if (best_acc < 0 || better) {
      best_acc = mean_acc;
      result.best_C = C;
      result.best_gamma = gamma;
    }
  }
  return result;
}

}  // namespace gprdl
