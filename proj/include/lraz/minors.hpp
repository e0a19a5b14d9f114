#pragma once

#include <vector>

#include "lraz/types.hpp"

namespace lraz {

// Value, first and second derivatives of det(A) with respect to the entries
// of the square matrix A. Entry (p, q) is flattened as p * k + q.
struct MinorDerivatives {
  cplx value{0.0, 0.0};
  CMat gradient;  // k x k, gradient(p, q) = d det / d a_pq (the cofactor)
  CMat hessian;   // k^2 x k^2
};

void minor_derivatives(const CMat& A, MinorDerivatives& out, bool with_hessian);

// All k-subsets of {0, ..., n-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int k);

CMat submatrix(const CMat& X, const std::vector<int>& rows, const std::vector<int>& cols);
Mat submatrix(const Mat& X, const std::vector<int>& rows, const std::vector<int>& cols);

std::vector<int> complement(const std::vector<int>& set, int n);

long long binomial(int n, int k);

}  // namespace lraz
