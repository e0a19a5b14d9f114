#include "lraz/types.hpp"

#include <cmath>

namespace lraz {

namespace {

double gaussian(Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

}  // namespace

CMat random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMat out(rows, cols);
  const double s = std::sqrt(0.5);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = cplx(s * gaussian(rng), s * gaussian(rng));
  return out;
}

CVec random_complex_vector(Eigen::Index size, Rng& rng) {
  CMat m = random_complex(size, 1, rng);
  return m.col(0);
}

Mat random_real(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Mat out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = gaussian(rng);
  return out;
}

cplx random_unit_complex(Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  return std::polar(1.0, angle(rng));
}

CVec vectorize(const CMat& X) {
  CVec v(X.size());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) v(i * X.cols() + j) = X(i, j);
  return v;
}

CMat unvectorize(const CVec& v, Eigen::Index rows, Eigen::Index cols) {
  CMat X(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) X(i, j) = v(i * cols + j);
  return X;
}

int numerical_rank(const CMat& A, double rel_tol) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<CMat> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++rank;
  return rank;
}

int numerical_rank(const Mat& A, double rel_tol) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++rank;
  return rank;
}

template <typename M>
typename M::Scalar small_det_impl(const M& A) {
  using S = typename M::Scalar;
  switch (A.rows()) {
    case 0:
      return S(1.0);
    case 1:
      return A(0, 0);
    case 2:
      return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    case 3:
      return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
             A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
             A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
    default:
      return A.partialPivLu().determinant();
  }
}

cplx small_det(const CMat& A) { return small_det_impl(A); }
double small_det(const Mat& A) { return small_det_impl(A); }

cplx frobenius_pairing(const CMat& A, const CMat& B) { return (A.array() * B.array()).sum(); }

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 over the combined key
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace lraz
