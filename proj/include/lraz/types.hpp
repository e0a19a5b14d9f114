#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace lraz {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Rng = std::mt19937_64;

// Standard complex Gaussian entries (real and imaginary parts N(0, 1/2)).
CMat random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng);
CVec random_complex_vector(Eigen::Index size, Rng& rng);
Mat random_real(Eigen::Index rows, Eigen::Index cols, Rng& rng);
cplx random_unit_complex(Rng& rng);

// Row-major vectorization: entry (i, j) of an m x n matrix maps to i * n + j.
CVec vectorize(const CMat& X);
CMat unvectorize(const CVec& v, Eigen::Index rows, Eigen::Index cols);

// Numerical rank with singular values below rel_tol * sigma_max treated as zero.
int numerical_rank(const CMat& A, double rel_tol);
int numerical_rank(const Mat& A, double rel_tol);

// Determinant of a small square complex matrix (Laplace for n <= 3, LU otherwise).
cplx small_det(const CMat& A);
double small_det(const Mat& A);

// Bilinear Frobenius pairing <A, B> = sum a_ij b_ij (no conjugation).
cplx frobenius_pairing(const CMat& A, const CMat& B);

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace lraz
