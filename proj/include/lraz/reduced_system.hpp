#pragma once

#include <vector>

#include "lraz/types.hpp"

namespace lraz {

// Square system used for path tracking. X = N z ranges over the constraint
// space (N real, orthonormal columns, mn x d). The rank condition is imposed by
// the (r+1)-minors of Y = G X H that border its leading r x r block, combined
// by a c' x c matrix R when the component meets the determinantal variety
// non-transversally. Unknowns y = (z, lambda) with lambda in C^{c'};
// parameters p = N^T vec(U) in C^d.
//   F1 = R M(Y)                            (c' equations)
//   F2 = p - z - N^T grad(lambda . R M)    (d equations)
class ReducedSystem {
 public:
  // An empty G or H selects the identity chart; only valid when m = n = r + 1,
  // where the single bordered minor is det X.
  ReducedSystem(int m, int n, int r, Mat N, CMat G, CMat H);

  // Random bordered-minor chart (unitary G, H), or the identity chart when m = n = r + 1.
  static ReducedSystem with_random_chart(int m, int n, int r, Mat N, Rng& rng);

  int m() const { return m_; }
  int n() const { return n_; }
  int r() const { return r_; }
  int d() const { return d_; }
  int c() const { return c_; }
  int c_reduced() const { return static_cast<int>(R_.rows()); }
  int size() const { return d_ + c_reduced(); }
  const Mat& basis() const { return N_; }

  // Choose the number of rank equations from the restricted gradients at a
  // point of the component; returns the chosen c'.
  int adapt_to_component(const CMat& X, Rng& rng, double rel_tol = 1e-8);
  void set_randomization(CMat R);
  const CMat& randomization() const { return R_; }

  bool identity_chart() const { return identity_chart_; }
  // Re-centre the bordered-minor chart on X using its singular vectors, so the
  // leading r x r block of G X H is diag(sigma_1..sigma_r). No-op for the identity chart.
  void adapt_chart(const CMat& X);
  // sigma_min of the leading block of G X H relative to sigma_r(X); 1 for the identity chart.
  double chart_quality(const CMat& X) const;
  // Coordinates (z, lambda) of X with least-squares multipliers at parameters p.
  CVec lift(const CMat& X, const CVec& p) const;

  CVec params(const CMat& U) const;
  CVec coordinates(const CMat& X) const;  // z = N^T vec X
  CMat matrix(const CVec& y) const;       // X from the leading d entries of y

  // Multiplier-compatible parameters for a point X on the component.
  CVec seed_params(const CMat& X, const CVec& lambda, CVec& y) const;

  // c x d matrix whose rows are the bordered-minor gradients restricted to the constraint space.
  CMat restricted_gradients(const CMat& X) const;

  void evaluate(const CVec& y, const CVec& p, CVec& F) const;
  void evaluate(const CVec& y, const CVec& p, CVec& F, CMat& J) const;

 private:
  void minor_data(const CMat& X, CVec& values, CMat& grads, std::vector<CMat>* kn,
                  std::vector<CMat>* hessians) const;

  int m_, n_, r_, d_, c_;
  Mat N_;
  bool selection_ = false;
  std::vector<int> free_;  // selection case: column of N -> entry index
  bool identity_chart_ = false;
  CMat G_, H_;
  CMat R_;
  bool identity_R_ = true;
};

// Orthonormal basis of {X : <V_k, X> = 0}; a coordinate selection for zero patterns.
Mat constraint_basis(int m, int n, const std::vector<Mat>& constraints);

}  // namespace lraz
