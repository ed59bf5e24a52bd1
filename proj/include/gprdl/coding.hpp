#ifndef GPRDL_CODING_HPP
#define GPRDL_CODING_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "gprdl/core.hpp"
#include "gprdl/scene.hpp"

namespace gprdl {

// Over-complete dictionary D (m x n, typically m < n) with unit-norm atoms.
struct Dictionary {
  Matrix atoms;  // atoms as columns

  Eigen::Index m() const { return atoms.rows(); }
  Eigen::Index n() const { return atoms.cols(); }

  // Enforces the unit-norm and finiteness invariants; throws InputError.
  void validate(double tol = 1e-9) const;
};

// Sparse coefficient vector over a dictionary: sorted (index, value) pairs.
struct SparseCode {
  std::vector<std::pair<int, double>> entries;  // strictly increasing indices
  int n = 0;                                    // ambient dimension
  bool degenerate = false;  // set when OMP stopped on an ill-conditioned Gram

  std::size_t nnz() const { return entries.size(); }
  Vector dense() const {
    Vector x = Vector::Zero(n);
    for (const auto& [j, v] : entries) x(j) = v;
    return x;
  }
};

enum class CodingMethod { kOmp, kLarsLasso };

struct CodingParams {
  CodingMethod method = CodingMethod::kOmp;
  double alpha = 0.1;   // OMP stopping threshold on the squared residual norm
  double lambda = 0.1;  // LARS-LASSO l1 penalty (absolute, no 1/m scaling)
  int max_nonzeros = 0;  // hard sparsity cap; 0 means "use m"

  int cap(Eigen::Index m) const {
    return max_nonzeros > 0 ? max_nonzeros : static_cast<int>(m);
  }
};

// Error-constrained orthogonal matching pursuit: greedy atom selection with
// an exact least-squares refit on the active set each iteration. Ties in
// |d_j^T r| break toward the lowest atom index. Stops when ||y - Dx||^2
// drops to alpha, the sparsity cap is reached, or the residual correlation
// falls below 1e-12.
SparseCode omp_encode(const Dictionary& D, const Vector& y, const CodingParams& params);

// l1-penalized least squares, min 1/2 ||y - Dx||^2 + lambda ||x||_1, solved
// by the LASSO homotopy path with a Cholesky factor of the active Gram
// maintained by rank-one append/remove. Handles sign crossings (atoms
// leaving the active set). Throws ConvergenceError past 10*m breakpoints.
SparseCode lars_lasso_encode(const Dictionary& D, const Vector& y, const CodingParams& params);

SparseCode encode(const Dictionary& D, const Vector& y, const CodingParams& params);

// Column-wise encode; result equals encoding each column independently.
std::vector<SparseCode> batch_encode(const Dictionary& D, const ProfileMatrix& Y,
                                     const CodingParams& params);

// Sum of x_j d_j over the stored nonzeros.
Vector reconstruct(const Dictionary& D, const SparseCode& x);

double mean_sparsity(const std::vector<SparseCode>& codes);

}  // namespace gprdl

#endif
