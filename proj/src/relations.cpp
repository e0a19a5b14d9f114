#include "lraz/relations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lraz/errors.hpp"
#include "lraz/minors.hpp"

namespace lraz {

namespace {

std::string label(char kind, int i, int j) {
  std::ostringstream out;
  out << kind << "(" << i + 1 << "," << j + 1 << ")";
  return out.str();
}

// Classes of identical rows of the mask matrix, in order of first appearance.
std::vector<std::vector<int>> equal_line_classes(const MaskMatrix& mask, bool rows) {
  const int count = rows ? mask.m : mask.n;
  const int length = rows ? mask.n : mask.m;
  std::vector<std::vector<int>> classes;
  std::vector<int> owner(count, -1);
  for (int a = 0; a < count; ++a) {
    if (owner[a] >= 0) continue;
    owner[a] = static_cast<int>(classes.size());
    classes.push_back({a});
    for (int b = a + 1; b < count; ++b) {
      if (owner[b] >= 0) continue;
      bool same = true;
      for (int t = 0; t < length && same; ++t)
        same = rows ? mask.bit(a, t) == mask.bit(b, t) : mask.bit(t, a) == mask.bit(t, b);
      if (same) {
        owner[b] = owner[a];
        classes.back().push_back(b);
      }
    }
  }
  return classes;
}

long long gamma_class(int size, int m) {
  if (size <= m) return binomial(size, 2);
  return static_cast<long long>(m) * (size - 1) - binomial(m, 2);
}

}  // namespace

cplx LinearForm::operator()(const CMat& X) const { return frobenius_pairing(X, C) + c; }

CriticalSpaceBasis critical_space(const CMat& U, const ZeroPattern& S, double rank_tol) {
  const int m = static_cast<int>(U.rows()), n = static_cast<int>(U.cols());
  if (S.rows() != m || S.cols() != n) throw ContractViolation("critical_space: pattern shape differs from U");
  CriticalSpaceBasis basis;
  basis.m = m;
  basis.n = n;
  const MaskMatrix mask = mask_matrix(S);
  basis.row_classes = equal_line_classes(mask, true);
  basis.col_classes = equal_line_classes(mask, false);

  for (const auto& cls : basis.row_classes)
    for (std::size_t a = 0; a < cls.size(); ++a)
      for (std::size_t b = a + 1; b < cls.size(); ++b) {
        const int i = cls[a], j = cls[b];
        LinearForm f{CMat::Zero(m, n), 0.0, label('r', i, j)};
        f.C.row(i) += U.row(j);
        f.C.row(j) -= U.row(i);
        basis.forms.push_back(std::move(f));
      }
  for (const auto& cls : basis.col_classes)
    for (std::size_t a = 0; a < cls.size(); ++a)
      for (std::size_t b = a + 1; b < cls.size(); ++b) {
        const int i = cls[a], j = cls[b];
        LinearForm f{CMat::Zero(m, n), 0.0, label('c', i, j)};
        f.C.col(i) += U.col(j);
        f.C.col(j) -= U.col(i);
        basis.forms.push_back(std::move(f));
      }
  for (const auto& [i, j] : S.entries()) {
    LinearForm f{CMat::Zero(m, n), 0.0, label('x', i, j)};
    f.C(i, j) = 1.0;
    basis.forms.push_back(std::move(f));
  }

  CMat stacked(basis.forms.size(), m * n);
  for (std::size_t k = 0; k < basis.forms.size(); ++k) stacked.row(k) = vectorize(basis.forms[k].C).transpose();
  basis.codimension = stacked.size() == 0 ? 0 : numerical_rank(stacked, rank_tol);
  return basis;
}

CriticalSpaceBasis critical_space(const Mat& U, const ZeroPattern& S, double rank_tol) {
  return critical_space(CMat(U.cast<cplx>()), S, rank_tol);
}

int codim_formula(const ZeroPattern& pattern) {
  // the gamma cases are stated for m <= n
  const ZeroPattern S = pattern.rows() > pattern.cols() ? pattern.transposed() : pattern;
  const MaskMatrix mask = mask_matrix(S);
  long long total = static_cast<long long>(S.size());
  for (const auto& cls : equal_line_classes(mask, true)) total += binomial(static_cast<int>(cls.size()), 2);
  for (const auto& cls : equal_line_classes(mask, false)) total += gamma_class(static_cast<int>(cls.size()), S.rows());
  return static_cast<int>(total);
}

bool codim_formula_applies(const ZeroPattern& S) {
  const MaskMatrix mask = mask_matrix(S);
  for (const bool rows : {true, false}) {
    for (const auto& cls : equal_line_classes(mask, rows)) {
      if (cls.size() < 2) continue;
      const int length = rows ? mask.n : mask.m;
      for (int t = 0; t < length; ++t)
        if (rows ? mask.bit(cls[0], t) : mask.bit(t, cls[0])) return false;
    }
  }
  return true;
}

SpanInclusionReport verify_span_inclusion(const SolutionSet& solutions, const CriticalSpaceBasis& basis, double tol) {
  SpanInclusionReport report;
  report.space_dimension = basis.dimension();
  const double u_norm = solutions.U.norm();
  CMat stacked(solutions.count(), basis.m * basis.n);
  for (int k = 0; k < solutions.count(); ++k) {
    const CMat& X = solutions.solutions[k].X;
    if (X.rows() != basis.m || X.cols() != basis.n) throw ContractViolation("verify_span_inclusion: shape mismatch");
    double worst = 0.0;
    for (const auto& f : basis.forms) worst = std::max(worst, std::abs(f(X)));
    const double tau = tol * (1.0 + u_norm) * (1.0 + X.norm());
    report.per_solution.push_back(worst);
    report.max_residual = std::max(report.max_residual, worst);
    report.max_ratio = std::max(report.max_ratio, worst / tau);
    if (!(worst <= tau)) report.pass = false;
    stacked.row(k) = vectorize(X).transpose();
  }
  report.span_rank = solutions.count() == 0 ? 0 : numerical_rank(stacked, tol);
  return report;
}

double affine_relation_residual(const CMat& X, const CMat& U, const std::vector<int>& I, int r) {
  const int m = static_cast<int>(U.rows());
  if (static_cast<int>(I.size()) != m) throw ContractViolation("affine_relation_residual: |I| must equal m");
  if (m > U.cols()) throw ContractViolation("affine_relation_residual: requires m <= n");
  std::vector<int> all(m);
  for (int i = 0; i < m; ++i) all[i] = i;
  const CMat UI = submatrix(U, all, I);
  const CMat XI = submatrix(X, all, I);
  MinorDerivatives md;
  minor_derivatives(UI, md, false);  // gradient of det is the cofactor matrix
  return std::abs(frobenius_pairing(XI, md.gradient) - static_cast<double>(r) * md.value);
}

MinorReport complementary_minor_residuals(const CMat& X, const CMat& U, const ZeroPattern& S, int r,
                                          double tau_det) {
  const int m = static_cast<int>(U.rows()), n = static_cast<int>(U.cols());
  MinorReport report;
  const CMat D = U - X;
  const double scale = U.norm() + X.norm();
  const int lo = std::max(1, std::min(m, n) - r + 1);
  for (int k = lo; k <= std::min(m, n); ++k) {
    const auto row_sets = subsets(m, k);
    const auto col_sets = subsets(n, k);
    const double bound = tau_det * std::pow(scale, k);
    for (const auto& A : row_sets)
      for (const auto& B : col_sets) {
        bool avoids = true;
        for (const auto& [i, j] : S.entries())
          if (std::binary_search(A.begin(), A.end(), i) && std::binary_search(B.begin(), B.end(), j)) {
            avoids = false;
            break;
          }
        if (!avoids) continue;
        MinorResidual entry{A, B, std::abs(small_det(submatrix(D, A, B))), bound};
        const double ratio = bound > 0.0 ? entry.value / bound : (entry.value > 0.0 ? INFINITY : 0.0);
        report.max_ratio = std::max(report.max_ratio, ratio);
        if (!(entry.value <= bound)) report.pass = false;
        report.entries.push_back(std::move(entry));
      }
  }
  return report;
}

RankDropReport corank_one_rank_drop_check(int m, const Mat& V, const CMat& U, const std::vector<CMat>& solutions,
                                          double rank_tol) {
  if (V.rows() != m || V.cols() != m || U.rows() != m || U.cols() != m)
    throw ContractViolation("corank_one_rank_drop_check: expected square m x m inputs");
  RankDropReport report;
  report.rank_v = V.norm() == 0.0 ? 0 : numerical_rank(V, rank_tol);
  for (std::size_t s = 0; s < solutions.size(); ++s) {
    const int rank = numerical_rank(CMat(U - solutions[s]), rank_tol);
    report.ranks.push_back(rank);
    for (int k = 2; k <= m; ++k) {
      const bool drop = rank <= k - 1;
      const bool predicted = report.rank_v <= k - 2;
      if (drop != predicted) {
        report.pass = false;
        std::ostringstream out;
        out << "solution " << s << ": rank(U-X)=" << rank << ", rank(V)=" << report.rank_v << ", k=" << k;
        report.violations.push_back(out.str());
      }
    }
  }
  return report;
}

bool VerificationReport::pass() const {
  return std::all_of(theorem_checks.begin(), theorem_checks.end(), [](const TheoremCheck& c) { return c.pass; });
}

VerificationReport verify_instance(const SolutionSet& solutions, const ZeroPattern& S, int r) {
  const CMat& U = solutions.U;
  const int m = static_cast<int>(U.rows()), n = static_cast<int>(U.cols());
  VerificationReport report;
  {
    std::ostringstream out;
    out << "m=" << m << " n=" << n << " r=" << r << " pattern=\"" << S.to_string() << "\" solutions=" << solutions.count();
    report.instance = out.str();
  }

  const CriticalSpaceBasis basis = critical_space(U, S);
  const SpanInclusionReport span = verify_span_inclusion(solutions, basis);
  report.theorem_checks.push_back({"critical_space_inclusion", span.pass, span.max_residual});

  TheoremCheck minors{"complementary_minors", true, 0.0};
  for (const auto& s : solutions.solutions) {
    const MinorReport mr = complementary_minor_residuals(s.X, U, S, r);
    minors.pass = minors.pass && mr.pass;
    for (const auto& e : mr.entries) minors.max_residual = std::max(minors.max_residual, e.value);
  }
  report.theorem_checks.push_back(minors);

  // the affine relation is stated for the transposed problem when m > n
  const bool wide = m <= n;
  const CMat Uw = wide ? CMat(U) : CMat(U.transpose());
  const ZeroPattern Sw = wide ? S : S.transposed();
  const int mw = std::min(m, n), nw = std::max(m, n);
  const double tau_affine = 1e-8;
  const auto column_sets = subsets(nw, mw);
  if (S.empty()) {
    TheoremCheck affine{"affine_relation", true, 0.0};
    for (const auto& s : solutions.solutions) {
      const CMat Xw = wide ? CMat(s.X) : CMat(s.X.transpose());
      const double bound = tau_affine * std::pow(Uw.norm() + Xw.norm(), mw);
      for (const auto& I : column_sets) {
        const double res = affine_relation_residual(Xw, Uw, I, r);
        affine.max_residual = std::max(affine.max_residual, res);
        if (!(res <= bound)) affine.pass = false;
      }
    }
    report.theorem_checks.push_back(affine);
  } else {
    for (const auto& I : column_sets) {
      bool meets = false;
      for (const auto& [i, j] : Sw.entries()) meets = meets || std::binary_search(I.begin(), I.end(), j);
      bool vanishes = true;
      double worst = 0.0;
      for (const auto& s : solutions.solutions) {
        const CMat Xw = wide ? CMat(s.X) : CMat(s.X.transpose());
        const double res = affine_relation_residual(Xw, Uw, I, r);
        worst = std::max(worst, res);
        vanishes = vanishes && res <= tau_affine * std::pow(Uw.norm() + Xw.norm(), mw);
      }
      std::ostringstream name, detail;
      name << "affine_relation_I={";
      for (std::size_t t = 0; t < I.size(); ++t) name << (t ? "," : "") << I[t] + 1;
      name << "}";
      detail << (meets ? "I meets S" : "I avoids S") << "; relation " << (vanishes ? "vanishes" : "does not vanish")
             << " (max residual " << worst << ")";
      report.conjecture_observations.push_back({name.str(), vanishes == !meets, detail.str()});
    }
  }

  {
    std::ostringstream detail;
    detail << "span rank " << span.span_rank << ", dim H " << span.space_dimension;
    report.conjecture_observations.push_back(
        {"span_equals_critical_space", span.span_rank == span.space_dimension, detail.str()});
  }

  if (!S.empty() && m == n && r == m - 1) {
    bool all_vanish = true;
    for (const auto& s : solutions.solutions) {
      const CMat D = U - s.X;
      const double bound = 1e-8 * std::pow(U.norm() + s.X.norm(), m);
      all_vanish = all_vanish && std::abs(small_det(D)) <= bound;
    }
    report.conjecture_observations.push_back(
        {"full_determinant_vanishes", all_vanish, "det(U - X) with [m] x [m] meeting S"});
  }
  return report;
}

}  // namespace lraz
