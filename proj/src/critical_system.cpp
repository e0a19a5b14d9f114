#include "lraz/critical_system.hpp"

#include <algorithm>

#include "lraz/errors.hpp"
#include "lraz/minors.hpp"

namespace lraz {

namespace {

Mat stack_constraints(const std::vector<Mat>& constraints, int m, int n) {
  Mat C(constraints.size(), m * n);
  for (std::size_t k = 0; k < constraints.size(); ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) C(k, i * n + j) = constraints[k](i, j);
  return C;
}

}  // namespace

CriticalSystem::CriticalSystem(int m, int n, int r, std::vector<Mat> constraints)
    : m_(m), n_(n), r_(r), constraints_(std::move(constraints)) {
  if (m < 1 || n < 1) throw ContractViolation("build_system: dimensions must be positive");
  if (r < 1 || r >= std::min(m, n)) throw ContractViolation("build_system: rank must satisfy 1 <= r < min(m, n)");
  for (const auto& V : constraints_) {
    if (V.rows() != m || V.cols() != n) throw ContractViolation("build_system: constraint shape mismatch");
    if (!V.allFinite()) throw ContractViolation("build_system: constraint has non-finite coefficients");
  }
  if (!constraints_.empty() &&
      numerical_rank(stack_constraints(constraints_, m, n), 1e-10) != static_cast<int>(constraints_.size()))
    throw ContractViolation("build_system: constraints are linearly dependent");
  for (const auto& I : subsets(m, r + 1))
    for (const auto& J : subsets(n, r + 1)) minors_.push_back({I, J});
}

CriticalSystem CriticalSystem::from_pattern(int m, int n, int r, const ZeroPattern& S) {
  if (S.rows() != m || S.cols() != n) throw ContractViolation("build_system: pattern shape mismatch");
  std::vector<Mat> constraints;
  for (const auto& [i, j] : S.entries()) {
    Mat V = Mat::Zero(m, n);
    V(i, j) = 1.0;
    constraints.push_back(V);
  }
  return CriticalSystem(m, n, r, std::move(constraints));
}

std::vector<int> CriticalSystem::equation_degrees() const {
  std::vector<int> deg;
  deg.insert(deg.end(), minors_.size(), r_ + 1);
  deg.insert(deg.end(), constraints_.size(), 1);
  deg.insert(deg.end(), static_cast<std::size_t>(m_ * n_), r_ + 1);
  return deg;
}

SystemPoint CriticalSystem::zero_point() const {
  return {CVec::Zero(m_ * n_), CVec::Zero(num_minors()), CVec::Zero(num_constraints())};
}

CVec CriticalSystem::pack(const SystemPoint& p) const {
  CVec v(num_variables());
  v << p.x, p.lambda, p.mu;
  return v;
}

SystemPoint CriticalSystem::unpack(const CVec& v) const {
  const int mn = m_ * n_;
  return {v.head(mn), v.segment(mn, num_minors()), v.tail(num_constraints())};
}

CVec CriticalSystem::evaluate(const SystemPoint& point, const CVec& u) const {
  const int mn = m_ * n_;
  const CMat X = unvectorize(point.x, m_, n_);
  CVec F(num_equations());
  CVec stationarity = u - point.x;
  MinorDerivatives md;
  for (int k = 0; k < num_minors(); ++k) {
    const auto& [I, J] = minors_[k];
    minor_derivatives(submatrix(X, I, J), md, false);
    F(k) = md.value;
    for (std::size_t a = 0; a < I.size(); ++a)
      for (std::size_t b = 0; b < J.size(); ++b) stationarity(I[a] * n_ + J[b]) -= point.lambda(k) * md.gradient(a, b);
  }
  for (int k = 0; k < num_constraints(); ++k) {
    cplx value = 0.0;
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) {
        value += constraints_[k](i, j) * point.x(i * n_ + j);
        stationarity(i * n_ + j) -= point.mu(k) * constraints_[k](i, j);
      }
    F(num_minors() + k) = value;
  }
  F.tail(mn) = stationarity;
  return F;
}

CMat CriticalSystem::jacobian(const SystemPoint& point, const CVec& u) const {
  (void)u;  // the Jacobian does not depend on the parameters
  const int mn = m_ * n_;
  const int nm = num_minors(), s = num_constraints();
  const CMat X = unvectorize(point.x, m_, n_);
  CMat Jac = CMat::Zero(num_equations(), num_variables());
  const int stat0 = nm + s;
  for (int e = 0; e < mn; ++e) Jac(stat0 + e, e) = -1.0;
  MinorDerivatives md;
  for (int k = 0; k < nm; ++k) {
    const auto& [I, J] = minors_[k];
    const int q = static_cast<int>(I.size());
    minor_derivatives(submatrix(X, I, J), md, true);
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) {
        const int e = I[a] * n_ + J[b];
        Jac(k, e) = md.gradient(a, b);
        Jac(stat0 + e, mn + k) = -md.gradient(a, b);
        for (int c = 0; c < q; ++c)
          for (int d = 0; d < q; ++d)
            Jac(stat0 + e, I[c] * n_ + J[d]) -= point.lambda(k) * md.hessian(a * q + b, c * q + d);
      }
  }
  for (int k = 0; k < s; ++k)
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) {
        Jac(nm + k, i * n_ + j) = constraints_[k](i, j);
        Jac(stat0 + i * n_ + j, mn + nm + k) = -constraints_[k](i, j);
      }
  return Jac;
}

SystemPoint CriticalSystem::lift_multipliers(const CVec& x, const CVec& u) const {
  const int mn = m_ * n_;
  const int nm = num_minors(), s = num_constraints();
  const CMat X = unvectorize(x, m_, n_);
  CMat A = CMat::Zero(mn, nm + s);
  MinorDerivatives md;
  for (int k = 0; k < nm; ++k) {
    const auto& [I, J] = minors_[k];
    minor_derivatives(submatrix(X, I, J), md, false);
    for (std::size_t a = 0; a < I.size(); ++a)
      for (std::size_t b = 0; b < J.size(); ++b) A(I[a] * n_ + J[b], k) = md.gradient(a, b);
  }
  for (int k = 0; k < s; ++k)
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) A(i * n_ + j, nm + k) = constraints_[k](i, j);
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(A);
  cod.setThreshold(1e-10);
  const CVec coeffs = cod.solve(CVec(u - x));
  return {x, coeffs.head(nm), coeffs.tail(s)};
}

double CriticalSystem::polish(SystemPoint& point, const CVec& u, int max_iterations) const {
  CVec v = pack(point);
  double residual = evaluate(point, u).norm();
  for (int it = 0; it < max_iterations; ++it) {
    const SystemPoint p = unpack(v);
    const CVec F = evaluate(p, u);
    Eigen::CompleteOrthogonalDecomposition<CMat> cod(jacobian(p, u));
    cod.setThreshold(1e-10);
    const CVec step = cod.solve(F);
    const CVec trial = v - step;
    const double trial_residual = evaluate(unpack(trial), u).norm();
    if (trial_residual > residual) break;
    v = trial;
    residual = trial_residual;
    if (step.norm() <= 1e-15 * (1.0 + v.norm())) break;
  }
  point = unpack(v);
  return residual;
}

bool random_constrained_point(int m, int n, int r, const std::vector<Mat>& constraints, Rng& rng, CMat& X,
                              int max_attempts) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const CMat A = random_complex(m, r, rng);
    CMat B;
    if (constraints.empty()) {
      B = random_complex(n, r, rng);
    } else {
      // <V_k, A B^T> = sum_{j,t} (V_k^T A)_{jt} B_{jt}
      CMat C(constraints.size(), n * r);
      for (std::size_t k = 0; k < constraints.size(); ++k) {
        const CMat W = constraints[k].transpose().cast<cplx>() * A;
        for (int j = 0; j < n; ++j)
          for (int t = 0; t < r; ++t) C(k, j * r + t) = W(j, t);
      }
      Eigen::FullPivLU<CMat> lu(C);
      lu.setThreshold(1e-10);
      const CMat kernel = lu.kernel();
      if (kernel.cols() == 0 || kernel.norm() == 0.0) continue;
      const CVec b = kernel * random_complex_vector(kernel.cols(), rng);
      B.resize(n, r);
      for (int j = 0; j < n; ++j)
        for (int t = 0; t < r; ++t) B(j, t) = b(j * r + t);
    }
    X = A * B.transpose();
    if (numerical_rank(X, 1e-8) == r) return true;
  }
  return false;
}

std::pair<CVec, SystemPoint> CriticalSystem::seed_pair(Rng& rng, int max_attempts) const {
  CMat X;
  if (!random_constrained_point(m_, n_, r_, constraints_, rng, X, max_attempts))
    throw ContractViolation("seed_pair: could not sample a rank-r point on the constraints");
  SystemPoint p{vectorize(X), random_complex_vector(num_minors(), rng), random_complex_vector(num_constraints(), rng)};
  // At u = 0 the stationarity block is -(x + sum lambda grad M + sum mu V),
  // so its negative is the parameter that makes the point exact.
  const CVec F = evaluate(p, CVec::Zero(m_ * n_));
  CVec u0 = -F.tail(m_ * n_);
  return {u0, p};
}

CriticalSystem corank_one_general_constraint(int m, const Mat& V) {
  if (V.rows() != m || V.cols() != m) throw ContractViolation("corank_one_general_constraint: V must be m x m");
  std::vector<Mat> constraints;
  if (V.norm() > 0.0) constraints.push_back(V);
  return CriticalSystem(m, m, m - 1, std::move(constraints));
}

}  // namespace lraz
