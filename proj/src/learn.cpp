#include "gprdl/learn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>

namespace gprdl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Leading singular triple (u, sigma, v) of E by alternating power iteration,
// warm-started from v0. Sign fixed so the largest-magnitude component of u
// is positive.
void leading_singular_pair(const Matrix& E, Vector& u, double& sigma, Vector& v,
                           const Vector& v0) {
  v = v0;
  const double n0 = v.norm();
  if (n0 == 0.0)
    v = Vector::Ones(E.cols()) / std::sqrt(static_cast<double>(E.cols()));
  else
    v /= n0;
  double prev_sigma = -1.0;
  sigma = 0.0;
  for (int it = 0; it < 1000; ++it) {
    u = E * v;
    const double un = u.norm();
    if (un == 0.0) break;
    u /= un;
    v = E.transpose() * u;
    sigma = v.norm();
    if (sigma == 0.0) break;
    v /= sigma;
    if (std::abs(sigma - prev_sigma) <= 1e-10 * std::max(1.0, sigma)) break;
    prev_sigma = sigma;
  }
  Eigen::Index imax;
  u.cwiseAbs().maxCoeff(&imax);
  if (u(imax) < 0) {
    u = -u;
    v = -v;
  }
}

void check_training_input(const ProfileMatrix& Y, const DictLearnConfig& config) {
  if (Y.count() == 0 || Y.data.size() == 0) throw DataError("dictionary training: empty data");
  if (!Y.data.allFinite()) throw DataError("dictionary training: non-finite data");
  if (config.n_atoms < 1 || config.iterations < 1)
    throw ConfigError("dictionary training: n_atoms and iterations must be >= 1");
}

}  // namespace

Dictionary init_dictionary(const ProfileMatrix& Y, int n_atoms, DictInit strategy,
                           std::uint64_t seed) {
  if (n_atoms < 1) throw ConfigError("init_dictionary: n_atoms must be >= 1");
  const Eigen::Index m = Y.m();
  std::mt19937_64 rng(seed);
  Dictionary D;
  D.atoms.resize(m, n_atoms);

  if (strategy == DictInit::kRandomColumns) {
    const Eigen::Index L = Y.count();
    if (L < n_atoms)
      throw DataError("init_dictionary: need at least n_atoms training columns, have " +
                      std::to_string(L));
    std::vector<Eigen::Index> idx(L);
    for (Eigen::Index i = 0; i < L; ++i) idx[i] = i;
    for (int k = 0; k < n_atoms; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, idx.size() - 1);
      std::swap(idx[k], idx[pick(rng)]);
      Vector col = Y.data.col(idx[k]);
      const double norm = col.norm();
      if (norm == 0.0) throw DataError("init_dictionary: selected column " +
                                       std::to_string(idx[k]) + " is all-zero");
      D.atoms.col(k) = col / norm;
    }
  } else {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int j = 0; j < n_atoms; ++j) {
      for (Eigen::Index i = 0; i < m; ++i) D.atoms(i, j) = gauss(rng);
      D.atoms.col(j).normalize();
    }
  }
  return D;
}

double objective(const Dictionary& D, const ProfileMatrix& Y,
                 const std::vector<SparseCode>& codes) {
  if (Y.m() != D.m() || static_cast<Eigen::Index>(codes.size()) != Y.count())
    throw InputError("objective: dimension mismatch");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < Y.count(); ++i) {
    Vector r = Y.data.col(i);
    for (const auto& [j, v] : codes[i].entries) r -= v * D.atoms.col(j);
    sum += r.squaredNorm();
  }
  return std::sqrt(sum);
}

std::pair<Dictionary, LearnReport> ksvd_train(const ProfileMatrix& Y,
                                              const DictLearnConfig& config) {
  check_training_input(Y, config);
  if (config.coding.method != CodingMethod::kOmp)
    throw ConfigError("ksvd_train: coding method must be OMP");

  const Eigen::Index m = Y.m();
  const Eigen::Index L = Y.count();
  const int n = config.n_atoms;

  Dictionary D = init_dictionary(Y, n, config.init, config.seed);
  LearnReport report;
  std::vector<SparseCode> codes(L);

  for (int t = 0; t < config.iterations; ++t) {
    // Coding pass. Keeping the previous code when it beats the fresh OMP
    // solution makes the objective trace non-increasing across iterations.
    const auto tic_code = Clock::now();
    for (Eigen::Index i = 0; i < L; ++i) {
      SparseCode fresh = omp_encode(D, Y.data.col(i), config.coding);
      if (t > 0) {
        Vector r_old = Y.data.col(i);
        for (const auto& [j, v] : codes[i].entries) r_old -= v * D.atoms.col(j);
        Vector r_new = Y.data.col(i);
        for (const auto& [j, v] : fresh.entries) r_new -= v * D.atoms.col(j);
        if (r_new.squaredNorm() <= r_old.squaredNorm()) codes[i] = std::move(fresh);
      } else {
        codes[i] = std::move(fresh);
      }
    }
    report.wall_time_coding += seconds_since(tic_code);

    const auto tic_update = Clock::now();
    // Residual R = Y - DX, kept exact through the atom sweep.
    Matrix R = Y.data;
    std::vector<std::vector<Eigen::Index>> users(n);
    for (Eigen::Index i = 0; i < L; ++i)
      for (const auto& [j, v] : codes[i].entries) {
        R.col(i) -= v * D.atoms.col(j);
        users[j].push_back(i);
      }

    std::set<Eigen::Index> replacement_used;
    for (int j = 0; j < n; ++j) {
      if (users[j].empty()) {
        // Replace a dead atom with the worst-represented training column.
        Eigen::Index worst = -1;
        double worst_err = -1.0;
        for (Eigen::Index i = 0; i < L; ++i) {
          if (replacement_used.count(i)) continue;
          const double e = R.col(i).squaredNorm();
          if (e > worst_err) {
            worst_err = e;
            worst = i;
          }
        }
        if (worst >= 0 && Y.data.col(worst).norm() > 0) {
          D.atoms.col(j) = Y.data.col(worst).normalized();
          replacement_used.insert(worst);
          ++report.replaced_atoms;
        }
        continue;
      }

      const auto& omega = users[j];
      const Eigen::Index nu = static_cast<Eigen::Index>(omega.size());
      Matrix E(m, nu);
      Vector prev_coef(nu);
      for (Eigen::Index t2 = 0; t2 < nu; ++t2) {
        const Eigen::Index i = omega[t2];
        double xji = 0.0;
        for (const auto& [jj, v] : codes[i].entries)
          if (jj == j) {
            xji = v;
            break;
          }
        prev_coef(t2) = xji;
        E.col(t2) = R.col(i) + xji * D.atoms.col(j);
      }

      Vector u, v;
      double sigma = 0.0;
      leading_singular_pair(E, u, sigma, v, prev_coef);
      if (sigma == 0.0) continue;  // restricted residual vanished

      D.atoms.col(j) = u;
      for (Eigen::Index t2 = 0; t2 < nu; ++t2) {
        const Eigen::Index i = omega[t2];
        const double coef = sigma * v(t2);
        for (auto& [jj, val] : codes[i].entries)
          if (jj == j) {
            val = coef;
            break;
          }
        R.col(i) = E.col(t2) - coef * u;
      }
    }
    report.wall_time_update += seconds_since(tic_update);

    // Entries rewritten to exactly zero would violate the SparseCode
    // invariant; prune them.
    for (auto& code : codes)
      std::erase_if(code.entries, [](const auto& e) { return e.second == 0.0; });

    report.objective_trace.push_back(R.norm());
  }

  return {std::move(D), std::move(report)};
}

std::pair<Dictionary, LearnReport> odl_train(const ProfileMatrix& Y,
                                             const DictLearnConfig& config) {
  check_training_input(Y, config);
  if (config.coding.method != CodingMethod::kLarsLasso)
    throw ConfigError("odl_train: coding method must be LARS-LASSO");

  const Eigen::Index m = Y.m();
  const Eigen::Index L = Y.count();
  const int n = config.n_atoms;

  Dictionary D = init_dictionary(Y, n, config.init, config.seed);
  LearnReport report;

  Matrix A = Matrix::Zero(n, n);   // sum of x x^T
  Matrix B = Matrix::Zero(m, n);   // sum of y x^T
  Matrix DA = Matrix::Zero(m, n);  // D * A, kept in sync across updates

  std::mt19937_64 rng(splitmix64(config.seed ^ 0x6f646c5f64726177ull));
  std::uniform_int_distribution<Eigen::Index> pick(0, L - 1);

  const long total_draws = static_cast<long>(config.iterations) * static_cast<long>(L);
  for (long draw = 0; draw < total_draws; ++draw) {
    const Eigen::Index i = pick(rng);
    const auto tic_code = Clock::now();
    SparseCode code = lars_lasso_encode(D, Y.data.col(i), config.coding);
    report.wall_time_coding += seconds_since(tic_code);

    const auto tic_update = Clock::now();
    if (config.decay != 1.0) {
      if (config.decay <= 0.0 || config.decay > 1.0)
        throw ConfigError("odl_train: decay must be in (0, 1]");
      A *= config.decay;
      B *= config.decay;
      DA *= config.decay;
    }
    // A += x x^T and B += y x^T over the code support; DA tracks D * A, so
    // it picks up (D x) x^T here and a rank-one correction per atom change
    // in the sweep below.
    Vector dx = Vector::Zero(m);
    for (const auto& [j, v] : code.entries) dx += v * D.atoms.col(j);
    for (const auto& [a, va] : code.entries) {
      for (const auto& [b, vb] : code.entries) A(a, b) += va * vb;
      B.col(a) += va * Y.data.col(i);
      DA.col(a) += va * dx;
    }

    // One block-coordinate-descent sweep over all atoms.
    for (int j = 0; j < n; ++j) {
      const double ajj = A(j, j);
      if (ajj <= 1e-10) continue;  // never-selected atom stays at init
      Vector u = D.atoms.col(j) + (B.col(j) - DA.col(j)) / ajj;
      const double norm = u.norm();
      if (norm <= 1e-12) continue;
      u /= norm;  // atoms stay exactly unit-norm
      Vector delta = u - D.atoms.col(j);
      if (delta.squaredNorm() > 0.0) {
        DA.noalias() += delta * A.row(j);
        D.atoms.col(j) = std::move(u);
      }
    }
    report.wall_time_update += seconds_since(tic_update);

    // Objective sampled every L draws on the full training set; the sample
    // is instrumentation and excluded from both timers.
    if ((draw + 1) % L == 0) {
      std::vector<SparseCode> codes(L);
      for (Eigen::Index c = 0; c < L; ++c)
        codes[c] = lars_lasso_encode(D, Y.data.col(c), config.coding);
      report.objective_trace.push_back(objective(D, Y, codes));
    }
  }

  return {std::move(D), std::move(report)};
}

}  // namespace gprdl
