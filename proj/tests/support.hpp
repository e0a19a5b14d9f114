#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance runner. Nothing here calls into the library's algorithms.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lraz/patterns.hpp"
#include "lraz/types.hpp"

namespace oracle {

using Cover = std::pair<std::vector<int>, std::vector<int>>;

// Minimal covers by exhaustive search: a cover is minimal when dropping any
// single chosen row or column breaks it (covers are closed upwards).
inline std::vector<Cover> covers(int m, int n, const std::vector<std::pair<int, int>>& zeros) {
  std::vector<Cover> out;
  auto covers_all = [&](unsigned rows, unsigned cols) {
    for (const auto& [i, j] : zeros)
      if (!((rows >> i) & 1u) && !((cols >> j) & 1u)) return false;
    return true;
  };
  for (unsigned rows = 0; rows < (1u << m); ++rows)
    for (unsigned cols = 0; cols < (1u << n); ++cols) {
      if (!covers_all(rows, cols)) continue;
      bool minimal = true;
      for (int i = 0; i < m && minimal; ++i)
        if (((rows >> i) & 1u) && covers_all(rows & ~(1u << i), cols)) minimal = false;
      for (int j = 0; j < n && minimal; ++j)
        if (((cols >> j) & 1u) && covers_all(rows, cols & ~(1u << j))) minimal = false;
      if (!minimal) continue;
      Cover c;
      for (int i = 0; i < m; ++i)
        if ((rows >> i) & 1u) c.first.push_back(i);
      for (int j = 0; j < n; ++j)
        if ((cols >> j) & 1u) c.second.push_back(j);
      out.push_back(c);
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline long long rank1_count(int m, int n, const std::vector<std::pair<int, int>>& zeros) {
  long long total = 0;
  for (const auto& [r, c] : covers(m, n, zeros))
    total += std::min(m - static_cast<int>(r.size()), n - static_cast<int>(c.size()));
  return total;
}

inline long long choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Closed forms for s zeros in one row, in one column, or on distinct rows and columns.
inline long long row_zeros(int s, int m, int n) { return std::min(m, n - s) + std::min(m - 1, n); }
inline long long col_zeros(int s, int m, int n) { return std::min(m, n - 1) + std::min(m - s, n); }
inline long long diag_zeros(int s, int m, int n) {
  long long total = 0;
  for (int j = 0; j <= s; ++j) total += choose(s, j) * std::min(m - j, n - s + j);
  return total;
}

inline std::vector<std::pair<int, int>> to_pairs(const lraz::ZeroPattern& S) {
  return {S.entries().begin(), S.entries().end()};
}

inline lraz::ZeroPattern random_pattern(int m, int n, int max_zeros, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(0, max_zeros);
  const int k = std::min(count(rng), m * n);
  std::vector<int> cells(m * n);
  for (int i = 0; i < m * n; ++i) cells[i] = i;
  std::shuffle(cells.begin(), cells.end(), rng);
  std::vector<std::pair<int, int>> e;
  for (int t = 0; t < k; ++t) e.emplace_back(cells[t] / n, cells[t] % n);
  return lraz::ZeroPattern(m, n, e);
}

// Best rank-2 nonnegative factorization by hierarchical alternating least
// squares with random restarts. Returns the smallest squared residual found.
inline double nmf_rank2(const Eigen::MatrixXd& U, int restarts, std::mt19937_64& rng, Eigen::MatrixXd* best = nullptr,
                        int max_iterations = 4000) {
  const int m = static_cast<int>(U.rows()), n = static_cast<int>(U.cols());
  const double scale = std::sqrt(std::max(U.maxCoeff(), 1e-12));
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double best_err = INFINITY;
  for (int rs = 0; rs < restarts; ++rs) {
    Eigen::MatrixXd W(m, 2), H(2, n);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < 2; ++k) W(i, k) = scale * uni(rng);
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < n; ++j) H(k, j) = scale * uni(rng);
    double prev = INFINITY;
    for (int it = 0; it < max_iterations; ++it) {
      for (int k = 0; k < 2; ++k) {
        const int o = 1 - k;
        const double hh = H.row(k).squaredNorm();
        if (hh > 0) {
          Eigen::VectorXd w = (U * H.row(k).transpose() - W.col(o) * H.row(o).dot(H.row(k))) / hh;
          W.col(k) = w.cwiseMax(0.0);
        }
        const double ww = W.col(k).squaredNorm();
        if (ww > 0) {
          Eigen::RowVectorXd h = (W.col(k).transpose() * U - W.col(k).dot(W.col(o)) * H.row(o)) / ww;
          H.row(k) = h.cwiseMax(0.0);
        }
      }
      const double err = (U - W * H).squaredNorm();
      if (it > 20 && prev - err <= 1e-15 * std::max(1.0, err)) break;
      prev = err;
    }
    const double err = (U - W * H).squaredNorm();
    if (err < best_err) {
      best_err = err;
      if (best) *best = W * H;
    }
  }
  return best_err;
}

// Numerical rank relative to the largest singular value.
inline int rank_of(const Eigen::MatrixXcd& A, double rel) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int k = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel * s(0)) ++k;
  return k;
}

}  // namespace oracle
