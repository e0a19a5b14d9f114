#include "lraz/nnrank2.hpp"

#include <algorithm>
#include <cmath>

#include "lraz/errors.hpp"
#include "lraz/minors.hpp"
#include "lraz/parallel.hpp"
#include "lraz/spectral.hpp"

namespace lraz {

namespace {

ZeroPattern pattern3(std::vector<Index2> entries) { return ZeroPattern(3, 3, std::move(entries)); }

std::vector<Index2> zero_entries(const Mat& X, double tau) {
  std::vector<Index2> e;
  for (int i = 0; i < X.rows(); ++i)
    for (int j = 0; j < X.cols(); ++j)
      if (std::abs(X(i, j)) <= tau) e.emplace_back(i, j);
  return e;
}

bool aligned(const ZeroPattern& S) {
  const auto& e = S.entries();
  for (std::size_t a = 0; a < e.size(); ++a)
    for (std::size_t b = a + 1; b < e.size(); ++b)
      if (e[a].first == e[b].first || e[a].second == e[b].second) return true;
  return false;
}

// Diagonal-type representatives with one, two and three zeros.
const std::vector<ZeroPattern>& diagonal_representatives() {
  static const std::vector<ZeroPattern> reps{pattern3({{0, 0}}), pattern3({{0, 0}, {1, 1}}),
                                             pattern3({{0, 0}, {1, 1}, {2, 2}})};
  return reps;
}

constexpr int kDiagonalDegrees[3] = {8, 25, 30};

}  // namespace

std::string to_string(NnFamily f) {
  switch (f) {
    case NnFamily::SvdPairs: return "svd_pairs";
    case NnFamily::DiagonalPattern: return "diagonal_pattern";
    case NnFamily::RowColZero: return "row_col_zero";
    case NnFamily::Rank1Submatrix: return "rank1_submatrix";
    case NnFamily::ZeroBlock: return "zero_block";
  }
  return "unknown";
}

const std::vector<CandidateFamily>& candidate_families() {
  static const std::vector<CandidateFamily> families{
      {NnFamily::SvdPairs, {pattern3({})}, 3},
      {NnFamily::DiagonalPattern, diagonal_representatives(), 9 * 8 + 18 * 25 + 6 * 30},
      {NnFamily::RowColZero, {pattern3({{0, 0}, {0, 1}, {0, 2}})}, 6},
      {NnFamily::Rank1Submatrix, {pattern3({{0, 0}, {0, 1}})}, 18 * 2},
      {NnFamily::ZeroBlock, {pattern3({{0, 0}, {0, 1}, {1, 0}, {1, 1}})}, 9},
  };
  return families;
}

CMat apply_pattern_map(const PatternMap& map, const CMat& M) {
  const CMat A = map.transpose ? CMat(M.transpose()) : M;
  CMat Y(A.rows(), A.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) Y(map.row_perm[i], map.col_perm[j]) = A(i, j);
  return Y;
}

CMat apply_inverse_pattern_map(const PatternMap& map, const CMat& Y) {
  CMat A(Y.rows(), Y.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) A(i, j) = Y(map.row_perm[i], map.col_perm[j]);
  return map.transpose ? CMat(A.transpose()) : A;
}

NonnegRank2Solver::NonnegRank2Solver(std::uint64_t seed, TrackerConfig cfg, MonodromyOptions opts)
    : cfg_(cfg), opts_(opts) {
  opts_.lift_multipliers = false;
  opts_.threads = 1;
  const auto& reps = diagonal_representatives();
  for (std::size_t b = 0; b < reps.size(); ++b) {
    const CriticalSystem system = CriticalSystem::from_pattern(3, 3, 2, reps[b]);
    SolutionSet best;
    // a short monodromy run can stop early; keep the largest of a few attempts
    for (int attempt = 0; attempt < 3; ++attempt) {
      Rng rng(derive_seed(seed, 100 * b + attempt));
      SolutionSet set = monodromy_solve(system, cfg_, opts_, rng);
      if (set.count() > best.count()) best = std::move(set);
      if (best.count() >= kDiagonalDegrees[b]) break;
    }
    bases_.push_back(std::move(best));
    expected_.push_back(kDiagonalDegrees[b]);
    for (const auto& member : orbit(reps[b])) {
      Member mb{member, static_cast<int>(b), {}};
      if (!find_pattern_map(reps[b], member, mb.map)) throw std::logic_error("orbit member without a pattern map");
      members_.push_back(std::move(mb));
    }
  }
}

std::vector<int> NonnegRank2Solver::base_counts() const {
  std::vector<int> counts;
  for (const auto& b : bases_) counts.push_back(b.count());
  return counts;
}

std::vector<NnCandidate> NonnegRank2Solver::enumerate_candidates(const Mat& U, Rng& rng,
                                                                 std::array<FamilyCensus, kNnFamilies>* census) const {
  if (U.rows() != 3 || U.cols() != 3) throw ContractViolation("nnrank2: expected a 3 x 3 matrix");
  if (!U.allFinite()) throw ContractViolation("nnrank2: matrix has non-finite entries");
  std::array<FamilyCensus, kNnFamilies> local{};
  for (const auto& f : candidate_families()) local[static_cast<int>(f.family)].expected = f.expected_count;
  std::vector<NnCandidate> out;
  auto add = [&](NnFamily family, const ZeroPattern& S, CMat X, bool is_real) {
    auto& c = local[static_cast<int>(family)];
    ++c.generated;
    if (is_real) ++c.real;
    out.push_back({family, S, std::move(X), is_real});
  };
  const Tolerances tol;

  try {
    for (const auto& p : eckart_young_points(U, 2)) add(NnFamily::SvdPairs, pattern3({}), p.X.cast<cplx>(), true);
  } catch (const std::exception&) {
    // rank-deficient or repeated spectrum; the census records the shortfall
  }

  for (const auto& mb : members_) {
    const SolutionSet& base = bases_[mb.base];
    const CMat V = apply_inverse_pattern_map(mb.map, U.cast<cplx>());
    const SolutionSet sol = solve_for_target(base, V, cfg_, opts_, rng, tol);
    for (const auto& s : sol.solutions) {
      const CMat X = apply_pattern_map(mb.map, s.X);
      add(NnFamily::DiagonalPattern, mb.pattern, X, s.is_real);
    }
    if (sol.count() < expected_[mb.base]) local[static_cast<int>(NnFamily::DiagonalPattern)].complete = false;
  }

  for (int line = 0; line < 3; ++line) {
    Mat X = U;
    X.row(line).setZero();
    add(NnFamily::RowColZero, pattern3({{line, 0}, {line, 1}, {line, 2}}), X.cast<cplx>(), true);
    X = U;
    X.col(line).setZero();
    add(NnFamily::RowColZero, pattern3({{0, line}, {1, line}, {2, line}}), X.cast<cplx>(), true);
  }

  // two zeros in one line; the complementary 2 x 2 block is a rank-one
  // critical point and the remaining entries are copied from U
  for (int line = 0; line < 3; ++line)
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        for (int transposed = 0; transposed < 2; ++transposed) {
          const Mat W = transposed ? Mat(U.transpose()) : U;
          const std::vector<int> rows = complement({line}, 3);
          const std::vector<int> cols{a, b};
          std::vector<RealCriticalPoint> pts;
          try {
            pts = eckart_young_points(submatrix(W, rows, cols), 1);
          } catch (const std::exception&) {
          }
          for (const auto& p : pts) {
            Mat X = W;
            X(line, a) = 0.0;
            X(line, b) = 0.0;
            for (int s = 0; s < 2; ++s)
              for (int t = 0; t < 2; ++t) X(rows[s], cols[t]) = p.X(s, t);
            ZeroPattern S = pattern3({{line, a}, {line, b}});
            if (transposed) {
              X.transposeInPlace();
              S = S.transposed();
            }
            add(NnFamily::Rank1Submatrix, S, X.cast<cplx>(), true);
          }
        }

  for (const auto& rows : subsets(3, 2))
    for (const auto& cols : subsets(3, 2)) {
      Mat X = U;
      std::vector<Index2> e;
      for (int i : rows)
        for (int j : cols) {
          X(i, j) = 0.0;
          e.emplace_back(i, j);
        }
      add(NnFamily::ZeroBlock, pattern3(e), X.cast<cplx>(), true);
    }

  for (auto& c : local)
    if (c.generated < c.expected) c.complete = false;
  if (census) *census = local;
  return out;
}

NnApproxResult NonnegRank2Solver::best_nonneg_rank2(const Mat& U, Rng& rng, const NnOptions& opts) const {
  if (U.rows() != 3 || U.cols() != 3) throw ContractViolation("nnrank2: expected a 3 x 3 matrix");
  if (!U.allFinite() || (U.array() < 0.0).any()) throw ContractViolation("nnrank2: matrix must be nonnegative");
  const double tau = opts.tau_nn * U.norm();
  NnApproxResult result;
  for (const auto& f : candidate_families()) result.census[static_cast<int>(f.family)].expected = f.expected_count;

  if (opts.short_circuit) {
    // The SVD truncation minimises over all rank <= 2 matrices; when it is
    // nonnegative it is also the optimum over the smaller nonnegative set.
    std::vector<RealCriticalPoint> ey;
    try {
      ey = eckart_young_points(U, std::min(2, std::max(1, numerical_rank(U, 1e-12))));
    } catch (const std::exception&) {
    }
    if (!ey.empty() && (ey.front().X.array() >= 0.0).all()) {
      result.best = ey.front().X;
      result.distance_sq = ey.front().distance_sq;
      result.zero_pattern = pattern3(zero_entries(result.best, tau));
      result.family = NnFamily::SvdPairs;
      result.interior = true;
      auto& c = result.census[0];
      c.generated = c.real = static_cast<int>(ey.size());
      for (const auto& p : ey) c.nonnegative += (p.X.array() >= 0.0).all() ? 1 : 0;
      c.discarded = c.generated - c.nonnegative;
      for (int k = 1; k < kNnFamilies; ++k) result.census[k].skipped = true;
      return result;
    }
  }

  std::array<FamilyCensus, kNnFamilies> census{};
  const auto candidates = enumerate_candidates(U, rng, &census);
  struct Feasible {
    Mat X;
    double d;
    NnFamily family;
  };
  std::vector<Feasible> feasible;
  for (const auto& c : candidates) {
    if (!c.is_real) continue;
    Mat X = c.X.real();
    if (X.minCoeff() < -tau) continue;
    X = X.cwiseMax(0.0);
    for (const auto& [i, j] : c.pattern.entries()) X(i, j) = 0.0;
    ++census[static_cast<int>(c.family)].nonnegative;
    feasible.push_back({X, (U - X).squaredNorm(), c.family});
  }
  for (auto& c : census) c.discarded = c.generated - c.nonnegative;
  result.census = census;
  for (const auto& c : census)
    if (!c.complete) result.incomplete = true;
  if (result.incomplete) result.warnings.push_back("candidate enumeration incomplete; optimality not guaranteed");
  if (feasible.empty()) throw std::runtime_error("nnrank2: no nonnegative candidate found");

  std::size_t best = 0;
  for (std::size_t k = 1; k < feasible.size(); ++k)
    if (feasible[k].d < feasible[best].d) best = k;
  const Feasible& f = feasible[best];
  result.best = f.X;
  result.distance_sq = f.d;
  result.family = f.family;
  result.interior = f.family == NnFamily::SvdPairs;
  result.zero_pattern = pattern3(zero_entries(f.X, tau));
  const double tie_tol = opts.tie * std::max(1.0, f.d);
  for (std::size_t k = 0; k < feasible.size(); ++k) {
    if (k == best) continue;
    if (std::abs(feasible[k].d - f.d) <= tie_tol && (feasible[k].X - f.X).norm() > 1e-8 * (1.0 + f.X.norm()))
      result.tie = true;
  }
  return result;
}

Mat sample_scaled_simplex(Rng& rng, double total) {
  std::exponential_distribution<double> exp1(1.0);
  Mat U(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) U(i, j) = exp1(rng);
  return U * (total / U.sum());
}

double ExperimentSummary::proportion(int zeros) const {
  const int done = count - failures;
  if (done <= 0 || zeros < 0 || zeros >= static_cast<int>(zero_histogram.size())) return 0.0;
  return static_cast<double>(zero_histogram[zeros]) / done;
}

ExperimentSummary sampling_experiment(const NonnegRank2Solver& solver, int count, std::uint64_t seed, int threads,
                                      const NnOptions& opts) {
  if (count < 1) throw ContractViolation("sampling_experiment: count must be positive");
  ExperimentSummary summary;
  summary.count = count;
  summary.records.resize(count);
  parallel_for(static_cast<std::size_t>(count), threads, [&](std::size_t k) {
    SampleRecord& rec = summary.records[k];
    rec.id = static_cast<int>(k);
    Rng rng(derive_seed(seed, k));
    const Mat U = sample_scaled_simplex(rng);
    try {
      const NnApproxResult res = solver.best_nonneg_rank2(U, rng, opts);
      rec.pattern = res.zero_pattern;
      rec.zeros = static_cast<int>(res.zero_pattern.size());
      rec.incomplete = res.incomplete;
      rec.interior = res.interior;
      rec.obs_a_violation = rec.zeros >= 3 || aligned(res.zero_pattern);
      if (rec.zeros == 0) {
        rec.obs_b = "na";
      } else {
        const Mat T = eckart_young_points(U, 2).front().X;
        bool negative = true;
        for (const auto& [i, j] : res.zero_pattern.entries()) negative = negative && T(i, j) < 0.0;
        rec.obs_b = negative ? "holds" : "fails";
      }
    } catch (const std::exception&) {
      rec.failed = true;
      rec.obs_b = "na";
    }
  });
  for (const auto& rec : summary.records) {
    if (rec.failed) {
      ++summary.failures;
      continue;
    }
    ++summary.zero_histogram[std::min<std::size_t>(rec.zeros, summary.zero_histogram.size() - 1)];
    summary.incomplete += rec.incomplete ? 1 : 0;
    summary.interior += rec.interior ? 1 : 0;
    summary.obs_a_violations += rec.obs_a_violation ? 1 : 0;
    summary.obs_b_holds += rec.obs_b == "holds" ? 1 : 0;
    summary.obs_b_fails += rec.obs_b == "fails" ? 1 : 0;
  }
  return summary;
}

}  // namespace lraz
