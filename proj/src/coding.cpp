#include "gprdl/coding.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>

namespace gprdl {

void Dictionary::validate(double tol) const {
  if (atoms.size() == 0) throw InputError("dictionary: empty atom matrix");
  if (!atoms.allFinite()) throw InputError("dictionary: non-finite entries");
  for (Eigen::Index j = 0; j < atoms.cols(); ++j) {
    const double norm = atoms.col(j).norm();
    if (std::abs(norm - 1.0) > tol)
      throw InputError("dictionary: atom " + std::to_string(j) + " has norm " +
                       std::to_string(norm));
  }
}

namespace {

// Lower-triangular Cholesky factor of the active-set Gram matrix, grown and
// shrunk as atoms enter and leave the homotopy path. A pivot below 1e-12
// triggers a full refactorization from the Gram.
class ActiveCholesky {
 public:
  int size() const { return k_; }

  // Append an atom whose Gram column against the current active set is g
  // (length k_) with self inner product g_self. Returns false if the pivot
  // stays degenerate even after refactorization.
  bool append(const Vector& g, double g_self, const Matrix& gram_full) {
    if (static_cast<int>(L_.rows()) < k_ + 1) {
      Matrix grown = Matrix::Zero(std::max<Eigen::Index>(8, 2 * (k_ + 1)),
                                  std::max<Eigen::Index>(8, 2 * (k_ + 1)));
      grown.topLeftCorner(k_, k_) = L_.topLeftCorner(k_, k_);
      L_ = std::move(grown);
    }
    Vector w = forward_solve(g);
    double pivot2 = g_self - w.squaredNorm();
    if (pivot2 < 1e-12) {
      ++k_;
      if (!refactor(gram_full)) {
        --k_;
        return false;
      }
      return true;
    }
    L_.row(k_).head(k_) = w.transpose();
    L_(k_, k_) = std::sqrt(pivot2);
    ++k_;
    return true;
  }

  // Remove row/column p and retriangularize the trailing block with Givens
  // rotations.
  void remove(int p) {
    for (int i = p; i + 1 < k_; ++i) L_.row(i).head(k_) = L_.row(i + 1).head(k_);
    --k_;
    for (int i = p; i < k_; ++i) {
      // Zero L_(i, i+1) by rotating columns i and i+1.
      const double a = L_(i, i), b = L_(i, i + 1);
      const double r = std::hypot(a, b);
      if (r == 0.0) continue;
      const double c = a / r, s = b / r;
      for (int row = i; row < k_; ++row) {
        const double u = L_(row, i), v = L_(row, i + 1);
        L_(row, i) = c * u + s * v;
        L_(row, i + 1) = -s * u + c * v;
      }
      if (L_(i, i) < 0) L_.col(i).segment(i, k_ - i) = -L_.col(i).segment(i, k_ - i);
    }
  }

  // Solves (L L^T) x = b.
  Vector solve(const Vector& b) const {
    Vector x = forward_solve(b);
    for (int i = k_ - 1; i >= 0; --i) {
      double s = x(i);
      for (int r = i + 1; r < k_; ++r) s -= L_(r, i) * x(r);
      x(i) = s / L_(i, i);
    }
    return x;
  }

  // Crude condition estimate from the extreme Cholesky pivots.
  double condition_estimate() const {
    if (k_ == 0) return 1.0;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int i = 0; i < k_; ++i) {
      lo = std::min(lo, L_(i, i));
      hi = std::max(hi, L_(i, i));
    }
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return (hi / lo) * (hi / lo);
  }

  bool refactor(const Matrix& gram) {
    Eigen::LLT<Matrix> llt(gram.topLeftCorner(k_, k_));
    if (llt.info() != Eigen::Success) return false;
    L_.topLeftCorner(k_, k_) = llt.matrixL();
    return true;
  }

 private:
  Vector forward_solve(const Vector& b) const {
    Vector x(k_);
    for (int i = 0; i < k_; ++i) {
      double s = b(i);
      for (int r = 0; r < i; ++r) s -= L_(i, r) * x(r);
      x(i) = s / L_(i, i);
    }
    return x;
  }

  Matrix L_ = Matrix::Zero(8, 8);
  int k_ = 0;
};

SparseCode make_code(const std::vector<int>& support, const Vector& coef, int n,
                     bool degenerate) {
  SparseCode code;
  code.n = n;
  code.degenerate = degenerate;
  for (std::size_t i = 0; i < support.size(); ++i)
    if (coef(static_cast<Eigen::Index>(i)) != 0.0)
      code.entries.emplace_back(support[i], coef(static_cast<Eigen::Index>(i)));
  std::sort(code.entries.begin(), code.entries.end());
  return code;
}

void check_input(const Dictionary& D, const Vector& y) {
  if (y.size() != D.m()) throw InputError("encode: profile length does not match dictionary");
  if (!y.allFinite()) throw InputError("encode: non-finite input vector");
}

}  // namespace

SparseCode omp_encode(const Dictionary& D, const Vector& y, const CodingParams& params) {
  check_input(D, y);
  if (params.alpha <= 0) throw InputError("omp_encode: alpha must be > 0");
  const int n = static_cast<int>(D.n());
  const int cap = std::min<int>(params.cap(D.m()), n);

  Vector residual = y;
  std::vector<int> support;
  std::vector<char> in_support(n, 0);
  Matrix gram;  // active-set Gram, grown as atoms enter
  Matrix dty_active;
  Vector coef;
  ActiveCholesky chol;
  bool degenerate = false;

  double res2 = residual.squaredNorm();
  while (res2 > params.alpha && static_cast<int>(support.size()) < cap) {
    // Atom most correlated with the residual; ties to the lowest index.
    const Vector corr = D.atoms.transpose() * residual;
    int best = -1;
    double best_abs = 0.0;
    for (int j = 0; j < n; ++j) {
      if (in_support[j]) continue;
      const double c = std::abs(corr(j));
      if (c > best_abs) {
        best_abs = c;
        best = j;
      }
    }
    if (best < 0 || best_abs < 1e-12) break;

    const int k = static_cast<int>(support.size());
    Matrix grown_gram = Matrix::Zero(k + 1, k + 1);
    if (k > 0) grown_gram.topLeftCorner(k, k) = gram;
    Vector g(k);
    for (int i = 0; i < k; ++i) g(i) = D.atoms.col(support[i]).dot(D.atoms.col(best));
    const double g_self = D.atoms.col(best).squaredNorm();
    grown_gram.col(k).head(k) = g;
    grown_gram.row(k).head(k) = g.transpose();
    grown_gram(k, k) = g_self;

    if (!chol.append(g, g_self, grown_gram)) {
      degenerate = true;
      break;
    }
    gram = std::move(grown_gram);
    support.push_back(best);
    in_support[best] = 1;

    if (chol.condition_estimate() > 1e12) {
      // Roll back the last atom and stop with the current code.
      chol.remove(k);
      gram.conservativeResize(k, k);
      support.pop_back();
      degenerate = true;
      break;
    }

    Vector dty(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) dty(i) = D.atoms.col(support[i]).dot(y);
    coef = chol.solve(dty);

    residual = y;
    for (std::size_t i = 0; i < support.size(); ++i)
      residual -= coef(static_cast<Eigen::Index>(i)) * D.atoms.col(support[i]);
    res2 = residual.squaredNorm();
  }

  if (support.empty()) {
    SparseCode code;
    code.n = n;
    code.degenerate = degenerate;
    return code;
  }
  return make_code(support, coef, n, degenerate);
}

SparseCode lars_lasso_encode(const Dictionary& D, const Vector& y, const CodingParams& params) {
  check_input(D, y);
  if (params.lambda < 0) throw InputError("lars_lasso_encode: lambda must be >= 0");
  const int n = static_cast<int>(D.n());
  const int m = static_cast<int>(D.m());
  const double lambda = params.lambda;
  const int cap = std::min<int>(params.cap(m), n);
  const int max_breakpoints = 10 * m;

  Vector c = D.atoms.transpose() * y;  // correlations at x = 0

  // lambda_cur tracks the current penalty level along the path.
  double lambda_cur = 0.0;
  int first = -1;
  for (int j = 0; j < n; ++j) {
    const double a = std::abs(c(j));
    if (a > lambda_cur) {
      lambda_cur = a;
      first = j;
    }
  }
  SparseCode empty;
  empty.n = n;
  if (first < 0 || lambda_cur <= lambda) return empty;

  std::vector<int> active;
  std::vector<double> sign;
  std::vector<char> in_active(n, 0);
  Vector x_active(0);
  Matrix gram(0, 0);
  ActiveCholesky chol;

  auto add_atom = [&](int j, double s) {
    const int k = static_cast<int>(active.size());
    Matrix grown = Matrix::Zero(k + 1, k + 1);
    if (k > 0) grown.topLeftCorner(k, k) = gram;
    Vector g(k);
    for (int i = 0; i < k; ++i) g(i) = D.atoms.col(active[i]).dot(D.atoms.col(j));
    const double g_self = D.atoms.col(j).squaredNorm();
    grown.col(k).head(k) = g;
    grown.row(k).head(k) = g.transpose();
    grown(k, k) = g_self;
    if (!chol.append(g, g_self, grown))
      throw ConvergenceError("lars_lasso_encode: degenerate active Gram");
    gram = std::move(grown);
    active.push_back(j);
    sign.push_back(s);
    in_active[j] = 1;
    x_active.conservativeResize(k + 1);
    x_active(k) = 0.0;
  };

  add_atom(first, c(first) > 0 ? 1.0 : -1.0);

  int breakpoints = 0;
  while (true) {
    if (++breakpoints > max_breakpoints)
      throw ConvergenceError("lars_lasso_encode: path exceeded " +
                             std::to_string(max_breakpoints) + " breakpoints");

    const int k = static_cast<int>(active.size());
    Vector s(k);
    for (int i = 0; i < k; ++i) s(i) = sign[i];
    // Path direction: x_A(lambda_cur - delta) = x_A + delta * theta.
    Vector theta = chol.solve(s);

    Vector dir = Vector::Zero(m);  // D_A * theta
    for (int i = 0; i < k; ++i) dir += theta(i) * D.atoms.col(active[i]);

    // Smallest step at which an inactive atom's correlation reaches the
    // shrinking penalty, |c_j - delta v_j| = lambda_cur - delta.
    double step = lambda_cur - lambda;  // reach the target penalty
    int enter = -1, leave = -1;
    double enter_sign = 0.0;
    const bool may_enter = k < cap;
    if (may_enter) {
      const Vector v = D.atoms.transpose() * dir;
      for (int j = 0; j < n; ++j) {
        if (in_active[j]) continue;
        const double vj = v(j);
        const double cj = c(j);
        // c_j - delta*v_j = +(lambda_cur - delta)  => delta = (lambda_cur - c_j)/(1 - v_j)
        // c_j - delta*v_j = -(lambda_cur - delta)  => delta = (lambda_cur + c_j)/(1 + v_j)
        const double cand[2] = {(1.0 - vj) > 1e-14 ? (lambda_cur - cj) / (1.0 - vj) : -1.0,
                                (1.0 + vj) > 1e-14 ? (lambda_cur + cj) / (1.0 + vj) : -1.0};
        for (int q = 0; q < 2; ++q) {
          const double d = cand[q];
          if (d > 1e-14 && d < step - 1e-15) {
            step = d;
            enter = j;
            leave = -1;
            enter_sign = q == 0 ? 1.0 : -1.0;
          }
        }
      }
    }
    // Sign crossings: active coefficient hits zero.
    for (int i = 0; i < k; ++i) {
      if (theta(i) == 0.0) continue;
      const double d = -x_active(i) / theta(i);
      if (d > 1e-14 && d < step - 1e-15) {
        step = d;
        leave = i;
        enter = -1;
      }
    }

    x_active += step * theta;
    // Update inactive correlations for the next breakpoint.
    lambda_cur -= step;

    if (enter < 0 && leave < 0) break;  // reached lambda

    // Refresh correlations from the residual (exact, avoids drift).
    Vector r = y;
    for (int i = 0; i < k; ++i) r -= x_active(i) * D.atoms.col(active[i]);
    c = D.atoms.transpose() * r;

    if (leave >= 0) {
      chol.remove(leave);
      const int kk = k - 1;
      Matrix shrunk(kk, kk);
      for (int a = 0, ai = 0; a < k; ++a) {
        if (a == leave) continue;
        for (int b = 0, bi = 0; b < k; ++b) {
          if (b == leave) continue;
          shrunk(ai, bi) = gram(a, b);
          ++bi;
        }
        ++ai;
      }
      gram = std::move(shrunk);
      in_active[active[leave]] = 0;
      active.erase(active.begin() + leave);
      sign.erase(sign.begin() + leave);
      Vector xs(kk);
      for (int i = 0, t = 0; i < k; ++i)
        if (i != leave) xs(t++) = x_active(i);
      x_active = std::move(xs);
    } else {
      add_atom(enter, enter_sign);
    }
  }

  return make_code(active, x_active, n, false);
}

SparseCode encode(const Dictionary& D, const Vector& y, const CodingParams& params) {
  return params.method == CodingMethod::kOmp ? omp_encode(D, y, params)
                                             : lars_lasso_encode(D, y, params);
}

std::vector<SparseCode> batch_encode(const Dictionary& D, const ProfileMatrix& Y,
                                     const CodingParams& params) {
  if (Y.m() != D.m()) throw InputError("batch_encode: profile length does not match dictionary");
  std::vector<SparseCode> codes(Y.count());
  for (Eigen::Index i = 0; i < Y.count(); ++i) codes[i] = encode(D, Y.data.col(i), params);
  return codes;
}

Vector reconstruct(const Dictionary& D, const SparseCode& x) {
  if (x.n != D.n()) throw InputError("reconstruct: code dimension does not match dictionary");
  Vector y = Vector::Zero(D.m());
  for (const auto& [j, v] : x.entries) {
    if (j < 0 || j >= D.n()) throw InputError("reconstruct: atom index out of range");
    y += v * D.atoms.col(j);
  }
  return y;
}

double mean_sparsity(const std::vector<SparseCode>& codes) {
  if (codes.empty()) throw InputError("mean_sparsity: empty code list");
  double total = 0.0;
  for (const auto& c : codes) total += static_cast<double>(c.nnz());
  return total / static_cast<double>(codes.size());
}

}  // namespace gprdl
