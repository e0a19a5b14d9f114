#include "lraz/minors.hpp"

#include <numeric>

namespace lraz {

namespace {

// det of A with rows {p, s} and columns {q, t} removed.
cplx det_without_two(const CMat& A, int p, int s, int q, int t) {
  const int k = static_cast<int>(A.rows());
  CMat sub(k - 2, k - 2);
  int ri = 0;
  for (int i = 0; i < k; ++i) {
    if (i == p || i == s) continue;
    int ci = 0;
    for (int j = 0; j < k; ++j) {
      if (j == q || j == t) continue;
      sub(ri, ci++) = A(i, j);
    }
    ++ri;
  }
  return small_det(sub);
}

}  // namespace

void minor_derivatives(const CMat& A, MinorDerivatives& out, bool with_hessian) {
  const int k = static_cast<int>(A.rows());
  out.value = small_det(A);
  out.gradient.resize(k, k);
  if (k == 1) {
    out.gradient(0, 0) = 1.0;
  } else {
    CMat sub(k - 1, k - 1);
    for (int p = 0; p < k; ++p) {
      for (int q = 0; q < k; ++q) {
        int ri = 0;
        for (int i = 0; i < k; ++i) {
          if (i == p) continue;
          int ci = 0;
          for (int j = 0; j < k; ++j) {
            if (j == q) continue;
            sub(ri, ci++) = A(i, j);
          }
          ++ri;
        }
        const double sign = ((p + q) % 2 == 0) ? 1.0 : -1.0;
        out.gradient(p, q) = sign * small_det(sub);
      }
    }
  }
  if (!with_hessian) return;
  out.hessian = CMat::Zero(k * k, k * k);
  if (k < 2) return;
  for (int p = 0; p < k; ++p) {
    for (int q = 0; q < k; ++q) {
      for (int s = 0; s < k; ++s) {
        if (s == p) continue;
        for (int t = 0; t < k; ++t) {
          if (t == q) continue;
          // a_st sits at (s', t') in the minor obtained by deleting row p, column q
          const int sp = s - (s > p ? 1 : 0);
          const int tp = t - (t > q ? 1 : 0);
          const double sign = ((p + q + sp + tp) % 2 == 0) ? 1.0 : -1.0;
          out.hessian(p * k + q, s * k + t) = sign * det_without_two(A, p, s, q, t);
        }
      }
    }
  }
}

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(k);
  std::iota(cur.begin(), cur.end(), 0);
  for (;;) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

CMat submatrix(const CMat& X, const std::vector<int>& rows, const std::vector<int>& cols) {
  CMat out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = X(rows[i], cols[j]);
  return out;
}

Mat submatrix(const Mat& X, const std::vector<int>& rows, const std::vector<int>& cols) {
  Mat out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = X(rows[i], cols[j]);
  return out;
}

std::vector<int> complement(const std::vector<int>& set, int n) {
  std::vector<bool> in(n, false);
  for (int i : set) in[i] = true;
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace lraz
