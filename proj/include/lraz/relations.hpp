#pragma once

#include <string>
#include <vector>

#include "lraz/homotopy.hpp"
#include "lraz/patterns.hpp"
#include "lraz/types.hpp"

namespace lraz {

// X -> <X, C>_F + c, bilinear (no conjugation).
struct LinearForm {
  CMat C;
  cplx c{0.0, 0.0};
  std::string label;  // "r(i,j)", "c(i,j)" or "x(i,j)", 1-based
  cplx operator()(const CMat& X) const;
};

struct CriticalSpaceBasis {
  int m = 0, n = 0;
  std::vector<LinearForm> forms;
  std::vector<std::vector<int>> row_classes;  // 0-based, classes of equal mask rows
  std::vector<std::vector<int>> col_classes;
  int codimension = 0;  // numerical rank of the stacked coefficients
  int dimension() const { return m * n - codimension; }
};

// Forms (XU^T - UX^T)_ij for mask-equal rows i < j, (X^TU - U^TX)_ij for
// mask-equal columns i < j, and x_ij for (i, j) in S.
CriticalSpaceBasis critical_space(const CMat& U, const ZeroPattern& S, double rank_tol = 1e-7);
CriticalSpaceBasis critical_space(const Mat& U, const ZeroPattern& S, double rank_tol = 1e-7);

// Closed-form codimension of the critical space for generic U.
int codim_formula(const ZeroPattern& S);
// The closed form is exact when every class of two or more mask-equal rows or
// columns avoids S. Otherwise the row and column forms involve entries of S and
// the count can exceed the true codimension (S = all of a 2 x 2 gives 6 > 4).
bool codim_formula_applies(const ZeroPattern& S);

struct SpanInclusionReport {
  bool pass = true;
  double max_residual = 0.0;  // max |form(X)|
  double max_ratio = 0.0;     // max |form(X)| / tau_lin
  std::vector<double> per_solution;
  int span_rank = 0;
  int space_dimension = 0;
};

// Every form must vanish on every solution within
// tau_lin = tol (1 + ||U||) (1 + ||X||). The span rank is reported only.
SpanInclusionReport verify_span_inclusion(const SolutionSet& solutions, const CriticalSpaceBasis& basis,
                                          double tol = 1e-7);

// |<X_[m],I, C(U_[m],I)> - r det U_[m],I| with C the cofactor matrix; |I| = m <= n.
double affine_relation_residual(const CMat& X, const CMat& U, const std::vector<int>& I, int r);

struct MinorResidual {
  std::vector<int> rows, cols;  // 0-based
  double value = 0.0;           // |M_{A,B}(U - X)|
  double bound = 0.0;           // tau_det (||U|| + ||X||)^|A|
};

struct MinorReport {
  bool pass = true;
  double max_ratio = 0.0;
  std::vector<MinorResidual> entries;
};

// All minors of U - X of size >= min(m, n) - r + 1 whose index set avoids S.
MinorReport complementary_minor_residuals(const CMat& X, const CMat& U, const ZeroPattern& S, int r,
                                          double tau_det = 1e-8);

struct RankDropReport {
  bool pass = true;
  int rank_v = 0;
  std::vector<int> ranks;  // numerical rank of U - X per solution
  std::vector<std::string> violations;
};

// For k = 2..m: rank(U - X) <= k - 1 iff rank(V) <= k - 2.
RankDropReport corank_one_rank_drop_check(int m, const Mat& V, const CMat& U, const std::vector<CMat>& solutions,
                                          double rank_tol = 1e-7);

struct TheoremCheck {
  std::string name;
  bool pass = true;
  double max_residual = 0.0;
};

struct Observation {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct VerificationReport {
  std::string instance;
  std::vector<TheoremCheck> theorem_checks;
  std::vector<Observation> conjecture_observations;
  bool pass() const;
};

// Theorem-level checks (span inclusion, complementary minors, affine relation
// when S is empty and the matrix is square-or-wide) plus conjecture-level observations.
VerificationReport verify_instance(const SolutionSet& solutions, const ZeroPattern& S, int r);

}  // namespace lraz
