#pragma once

// Independent reference implementations used only by tests. Everything here
// is deliberately written against the plainest possible formulation so that
// agreement with the library is meaningful.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "gm/dense.hpp"
#include "gm/rng.hpp"

namespace oracle {

/// Exhaustive minimum / maximum assignment over all permutations (square).
inline double brute_force_lap(const gm::DenseMatrix& c, bool maximize,
                              std::vector<std::size_t>* best_perm = nullptr) {
  const std::size_t n = c.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = maximize ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += c(i, perm[i]);
    if (maximize ? total > best : total < best) {
      best = total;
      if (best_perm) *best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Exhaustive optimum over permutations restricted to admissible cells;
/// returns false when no perfect matching exists on them. allowed(i, j) != 0
/// marks an admissible cell whose cost sits in cost(i, j).
inline bool brute_force_sparse_lap(const gm::DenseMatrix& cost, const gm::DenseMatrix& allowed,
                                   bool maximize, double& best) {
  const std::size_t n = cost.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  bool found = false;
  best = maximize ? -std::numeric_limits<double>::infinity()
                  : std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (allowed(i, perm[i]) == 0.0) {
        ok = false;
      } else {
        total += cost(i, perm[i]);
      }
    }
    if (ok && (maximize ? total > best : total < best)) {
      best = total;
      found = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return found;
}

/// O(n^3) Hungarian method with potentials, written independently of the
/// library's augmenting-path solver. Minimizes; square matrices.
inline double hungarian_min(const gm::DenseMatrix& a, std::vector<std::size_t>* out = nullptr) {
  const auto n = static_cast<std::ptrdiff_t>(a.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::ptrdiff_t> p(n + 1, 0), way(n + 1, 0);
  for (std::ptrdiff_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::ptrdiff_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const std::ptrdiff_t i0 = p[j0];
      std::ptrdiff_t j1 = -1;
      double delta = inf;
      for (std::ptrdiff_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::ptrdiff_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::ptrdiff_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  double total = 0.0;
  if (out) out->assign(n, 0);
  for (std::ptrdiff_t j = 1; j <= n; ++j) {
    if (p[j] > 0) {
      total += a(p[j] - 1, j - 1);
      if (out) (*out)[p[j] - 1] = static_cast<std::size_t>(j - 1);
    }
  }
  return total;
}

/// Uniformly random dense matrix.
inline gm::DenseMatrix random_matrix(gm::Rng& rng, std::size_t rows, std::size_t cols,
                                     double lo = -1.0, double hi = 1.0) {
  gm::DenseMatrix m(rows, cols);
  for (std::size_t k = 0; k < m.size(); ++k)
    m.data()[k] = lo + (hi - lo) * rng.next_double();
  return m;
}

inline gm::DenseMatrix random_int_matrix(gm::Rng& rng, std::size_t n, int lo, int hi) {
  gm::DenseMatrix m(n, n);
  for (std::size_t k = 0; k < m.size(); ++k)
    m.data()[k] = static_cast<double>(lo + static_cast<int>(rng.next_below(
                                               static_cast<std::uint64_t>(hi - lo + 1))));
  return m;
}

/// trace(A^T Q B Q^T) over full dense matrices, by definition.
inline double qap_trace(const gm::DenseMatrix& a, const gm::DenseMatrix& b,
                        const gm::DenseMatrix& q) {
  const std::size_t n = a.rows();
  // M = Q B Q^T
  gm::DenseMatrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) acc += q(i, k) * b(k, l) * q(j, l);
      m(i, j) = acc;
    }
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t += a(i, j) * m(i, j);
  return t;
}

}  // namespace oracle
