#pragma once

#include <utility>
#include <vector>

#include "lraz/patterns.hpp"
#include "lraz/types.hpp"

namespace lraz {

struct SystemPoint {
  CVec x;  // row-major entries of X
  CVec lambda;
  CVec mu;
};

struct MinorIndex {
  std::vector<int> rows;
  std::vector<int> cols;
};

// Lagrange system for the critical points of ||U - X||^2 on rank <= r
// matrices satisfying <V_k, X> = 0. Equation order: all (r+1)-minors in
// lexicographic (I, J) order, then the linear constraints, then the mn
// stationarity equations u_ij - x_ij - sum lambda dM/dx_ij - sum mu dL/dx_ij.
class CriticalSystem {
 public:
  CriticalSystem(int m, int n, int r, std::vector<Mat> constraints);

  static CriticalSystem from_pattern(int m, int n, int r, const ZeroPattern& S);

  int m() const { return m_; }
  int n() const { return n_; }
  int r() const { return r_; }
  const std::vector<MinorIndex>& minors() const { return minors_; }
  const std::vector<Mat>& constraints() const { return constraints_; }

  int num_minors() const { return static_cast<int>(minors_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  int num_variables() const { return m_ * n_ + num_minors() + num_constraints(); }
  int num_equations() const { return num_minors() + num_constraints() + m_ * n_; }
  // Polynomial degree of each equation, in equation order.
  std::vector<int> equation_degrees() const;

  SystemPoint zero_point() const;
  CVec pack(const SystemPoint& p) const;
  SystemPoint unpack(const CVec& v) const;

  CVec evaluate(const SystemPoint& point, const CVec& u) const;
  // Jacobian with respect to (x, lambda, mu); U is a parameter.
  CMat jacobian(const SystemPoint& point, const CVec& u) const;

  // Least-squares multipliers (minimum norm) for a given X; the stationarity
  // residual of the returned point measures how critical X is.
  SystemPoint lift_multipliers(const CVec& x, const CVec& u) const;

  // Gauss-Newton refinement with minimum-norm steps; returns the final residual norm.
  double polish(SystemPoint& point, const CVec& u, int max_iterations = 8) const;

  // Random rank-r point on the constraints plus random multipliers, with U
  // defined through the stationarity equations.
  std::pair<CVec, SystemPoint> seed_pair(Rng& rng, int max_attempts = 50) const;

 private:
  int m_, n_, r_;
  std::vector<Mat> constraints_;
  std::vector<MinorIndex> minors_;
};

// Square corank-one system with one general linear constraint <V, X> = 0;
// V = 0 gives the unconstrained system.
CriticalSystem corank_one_general_constraint(int m, const Mat& V);

// Random rank-r matrix satisfying the linear constraints: A is random, B is a
// random solution of the linear conditions <V_k, A B^T> = 0. Returns false on
// repeated rank loss.
bool random_constrained_point(int m, int n, int r, const std::vector<Mat>& constraints, Rng& rng, CMat& X,
                              int max_attempts = 50);

}  // namespace lraz
