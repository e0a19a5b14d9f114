#include "lraz/reduced_system.hpp"

#include <cmath>

#include "lraz/errors.hpp"
#include "lraz/minors.hpp"

namespace lraz {

namespace {

bool is_unit_coordinate(const Mat& V, int& index) {
  int found = -1;
  for (Eigen::Index i = 0; i < V.rows(); ++i)
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
      if (V(i, j) == 0.0) continue;
      if (V(i, j) != 1.0 || found >= 0) return false;
      found = static_cast<int>(i * V.cols() + j);
    }
  index = found;
  return found >= 0;
}

CMat random_unitary(int k, Rng& rng) {
  Eigen::HouseholderQR<CMat> qr(random_complex(k, k, rng));
  return qr.householderQ() * CMat::Identity(k, k);
}

}  // namespace

Mat constraint_basis(int m, int n, const std::vector<Mat>& constraints) {
  const int mn = m * n;
  std::vector<bool> fixed(mn, false);
  bool coordinates = true;
  for (const auto& V : constraints) {
    int idx;
    if (!is_unit_coordinate(V, idx)) {
      coordinates = false;
      break;
    }
    fixed[idx] = true;
  }
  if (coordinates) {
    int d = 0;
    for (int e = 0; e < mn; ++e) d += fixed[e] ? 0 : 1;
    Mat N = Mat::Zero(mn, d);
    int col = 0;
    for (int e = 0; e < mn; ++e)
      if (!fixed[e]) N(e, col++) = 1.0;
    return N;
  }
  Mat C(constraints.size(), mn);
  for (std::size_t k = 0; k < constraints.size(); ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) C(k, i * n + j) = constraints[k](i, j);
  Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeFullV);
  const int rank = numerical_rank(C, 1e-10);
  return svd.matrixV().rightCols(mn - rank);
}

ReducedSystem::ReducedSystem(int m, int n, int r, Mat N, CMat G, CMat H)
    : m_(m), n_(n), r_(r), d_(static_cast<int>(N.cols())), c_((m - r) * (n - r)), N_(std::move(N)),
      G_(std::move(G)), H_(std::move(H)) {
  if (r < 1 || r >= std::min(m, n)) throw ContractViolation("reduced system: rank must satisfy 1 <= r < min(m, n)");
  if (N_.rows() != m * n) throw ContractViolation("reduced system: basis has wrong row count");
  identity_chart_ = G_.size() == 0 || H_.size() == 0;
  if (identity_chart_ && !(m == n && m == r + 1))
    throw ContractViolation("reduced system: identity chart needs m = n = r + 1");
  selection_ = true;
  free_.assign(d_, -1);
  for (int col = 0; col < d_ && selection_; ++col) {
    int idx;
    if (!is_unit_coordinate(N_.col(col), idx)) selection_ = false;
    else free_[col] = idx;
  }
  R_ = CMat::Identity(c_, c_);
  identity_R_ = true;
}

ReducedSystem ReducedSystem::with_random_chart(int m, int n, int r, Mat N, Rng& rng) {
  if (m == n && m == r + 1) return ReducedSystem(m, n, r, std::move(N), CMat(), CMat());
  CMat G = random_unitary(m, rng);
  CMat H = random_unitary(n, rng);
  return ReducedSystem(m, n, r, std::move(N), std::move(G), std::move(H));
}

void ReducedSystem::set_randomization(CMat R) {
  if (R.cols() != c_ || R.rows() < 1 || R.rows() > c_) throw ContractViolation("reduced system: bad randomization");
  identity_R_ = R.rows() == c_ && R.isApprox(CMat::Identity(c_, c_), 0.0);
  R_ = std::move(R);
}

int ReducedSystem::adapt_to_component(const CMat& X, Rng& rng, double rel_tol) {
  const CMat grads = restricted_gradients(X);
  const int cp = std::max(1, numerical_rank(grads, rel_tol));
  if (cp == c_) set_randomization(CMat::Identity(c_, c_));
  else set_randomization(random_complex(cp, c_, rng));
  return cp;
}

void ReducedSystem::adapt_chart(const CMat& X) {
  if (identity_chart_) return;
  Eigen::JacobiSVD<CMat> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
  G_ = svd.matrixU().adjoint();
  H_ = svd.matrixV();
}

double ReducedSystem::chart_quality(const CMat& X) const {
  if (identity_chart_) return 1.0;
  const CMat Y = G_ * X * H_;
  Eigen::JacobiSVD<CMat> lead(Y.topLeftCorner(r_, r_));
  Eigen::JacobiSVD<CMat> full(X);
  const double sr = full.singularValues()(r_ - 1);
  if (!(sr > 0.0)) return 0.0;
  return lead.singularValues()(r_ - 1) / sr;
}

CVec ReducedSystem::lift(const CMat& X, const CVec& p) const {
  const CVec z = coordinates(X);
  const CMat A = restricted_gradients(X).transpose() * R_.transpose();
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(A);
  CVec y(size());
  y << z, cod.solve(CVec(p - z));
  return y;
}

CVec ReducedSystem::params(const CMat& U) const { return coordinates(U); }

CVec ReducedSystem::coordinates(const CMat& X) const {
  const CVec v = vectorize(X);
  if (selection_) {
    CVec z(d_);
    for (int k = 0; k < d_; ++k) z(k) = v(free_[k]);
    return z;
  }
  return N_.transpose().cast<cplx>() * v;
}

CMat ReducedSystem::matrix(const CVec& y) const {
  if (selection_) {
    CVec v = CVec::Zero(m_ * n_);
    for (int k = 0; k < d_; ++k) v(free_[k]) = y(k);
    return unvectorize(v, m_, n_);
  }
  return unvectorize(N_.cast<cplx>() * y.head(d_), m_, n_);
}

void ReducedSystem::minor_data(const CMat& X, CVec& values, CMat& grads, std::vector<CMat>* kn,
                               std::vector<CMat>* hessians) const {
  const int q = r_ + 1;
  values.resize(c_);
  grads.resize(c_, d_);
  if (kn) kn->resize(c_);
  if (hessians) hessians->resize(c_);
  MinorDerivatives md;
  const bool want_hessian = hessians != nullptr;

  if (identity_chart_) {
    minor_derivatives(X, md, want_hessian);
    values(0) = md.value;
    for (int k = 0; k < d_; ++k) {
      if (selection_) {
        grads(0, k) = md.gradient(free_[k] / n_, free_[k] % n_);
      } else {
        cplx g = 0.0;
        for (int e = 0; e < m_ * n_; ++e) g += N_(e, k) * md.gradient(e / n_, e % n_);
        grads(0, k) = g;
      }
    }
    if (want_hessian) {
      if (selection_) {
        CMat& h = (*hessians)[0];
        h.resize(d_, d_);
        for (int a = 0; a < d_; ++a)
          for (int b = 0; b < d_; ++b) h(a, b) = md.hessian(free_[a], free_[b]);
        (*kn)[0].resize(0, 0);
      } else {
        const CMat Nc = N_.cast<cplx>();
        (*hessians)[0] = Nc.transpose() * md.hessian * Nc;
        (*kn)[0].resize(0, 0);
      }
    }
    return;
  }

  const CMat Y = G_ * X * H_;
  std::vector<int> I(q), J(q);
  for (int t = 0; t < r_; ++t) I[t] = J[t] = t;
  CMat sub(q, q), GI(q, m_), HJ(n_, q);
  int k = 0;
  for (int a = r_; a < m_; ++a) {
    for (int b = r_; b < n_; ++b, ++k) {
      I[r_] = a;
      J[r_] = b;
      for (int s = 0; s < q; ++s)
        for (int t = 0; t < q; ++t) sub(s, t) = Y(I[s], J[t]);
      minor_derivatives(sub, md, want_hessian);
      values(k) = md.value;
      for (int s = 0; s < q; ++s) GI.row(s) = G_.row(I[s]);
      for (int t = 0; t < q; ++t) HJ.col(t) = H_.col(J[t]);
      const CMat gradX = GI.transpose() * md.gradient * HJ.transpose();  // m x n
      for (int col = 0; col < d_; ++col) {
        if (selection_) {
          grads(k, col) = gradX(free_[col] / n_, free_[col] % n_);
        } else {
          cplx g = 0.0;
          for (int e = 0; e < m_ * n_; ++e) g += N_(e, col) * gradX(e / n_, e % n_);
          grads(k, col) = g;
        }
      }
      if (want_hessian) {
        // K[(s,t),(i,j)] = G(I_s, i) H(j, J_t); store K N
        CMat& KN = (*kn)[k];
        KN.resize(q * q, d_);
        for (int s = 0; s < q; ++s)
          for (int t = 0; t < q; ++t) {
            for (int col = 0; col < d_; ++col) {
              if (selection_) {
                const int e = free_[col];
                KN(s * q + t, col) = GI(s, e / n_) * HJ(e % n_, t);
              } else {
                cplx acc = 0.0;
                for (int e = 0; e < m_ * n_; ++e)
                  if (N_(e, col) != 0.0) acc += N_(e, col) * GI(s, e / n_) * HJ(e % n_, t);
                KN(s * q + t, col) = acc;
              }
            }
          }
        (*hessians)[k] = md.hessian;
      }
    }
  }
}

CMat ReducedSystem::restricted_gradients(const CMat& X) const {
  CVec values;
  CMat grads;
  minor_data(X, values, grads, nullptr, nullptr);
  return grads;
}

CVec ReducedSystem::seed_params(const CMat& X, const CVec& lambda, CVec& y) const {
  const CMat grads = restricted_gradients(X);
  const CVec z = coordinates(X);
  const CVec nu = R_.transpose() * lambda;
  y.resize(size());
  y << z, lambda;
  return z + grads.transpose() * nu;
}

void ReducedSystem::evaluate(const CVec& y, const CVec& p, CVec& F) const {
  const CMat X = matrix(y);
  CVec values;
  CMat grads;
  minor_data(X, values, grads, nullptr, nullptr);
  const int cp = c_reduced();
  const CVec lambda = y.tail(cp);
  F.resize(size());
  if (identity_R_) {
    F.head(cp) = values;
    F.tail(d_) = p - y.head(d_) - grads.transpose() * lambda;
  } else {
    F.head(cp) = R_ * values;
    F.tail(d_) = p - y.head(d_) - grads.transpose() * (R_.transpose() * lambda);
  }
}

void ReducedSystem::evaluate(const CVec& y, const CVec& p, CVec& F, CMat& J) const {
  const CMat X = matrix(y);
  CVec values;
  CMat grads;
  std::vector<CMat> kn, hess;
  minor_data(X, values, grads, &kn, &hess);
  const int cp = c_reduced();
  const CVec lambda = y.tail(cp);
  const CVec nu = identity_R_ ? lambda : CVec(R_.transpose() * lambda);
  F.resize(size());
  J.setZero(size(), size());
  if (identity_R_) {
    F.head(cp) = values;
    J.topLeftCorner(cp, d_) = grads;
    J.bottomRightCorner(d_, cp) = -grads.transpose();
  } else {
    F.head(cp) = R_ * values;
    J.topLeftCorner(cp, d_) = R_ * grads;
    J.bottomRightCorner(d_, cp) = -(grads.transpose() * R_.transpose());
  }
  F.tail(d_) = p - y.head(d_) - grads.transpose() * nu;
  auto block = J.bottomLeftCorner(d_, d_);
  block.setIdentity();
  block *= -1.0;
  for (int k = 0; k < c_; ++k) {
    if (nu(k) == 0.0) continue;
    if (identity_chart_) block -= nu(k) * hess[k];
    else block -= nu(k) * (kn[k].transpose() * hess[k] * kn[k]);
  }
}

}  // namespace lraz
