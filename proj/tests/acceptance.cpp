// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.
// LRAZ_STRETCH=1 additionally reports (without gating) the larger table entries.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lraz/critical_system.hpp"
#include "lraz/homotopy.hpp"
#include "lraz/nnrank2.hpp"
#include "lraz/patterns.hpp"
#include "lraz/relations.hpp"
#include "lraz/spectral.hpp"
#include "support.hpp"

using namespace lraz;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <typename T>
  Detail& operator<<(const T& v) {
    out_ << v;
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

Mat gaussian(int m, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat U(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) U(i, j) = g(rng);
  return U;
}

ZeroPattern from_mask(int m, int n, unsigned mask) {
  std::vector<Index2> e;
  for (int k = 0; k < m * n; ++k)
    if ((mask >> k) & 1u) e.emplace_back(k / n, k % n);
  return ZeroPattern(m, n, e);
}

ZeroPattern diagonal(int m, int n, int s) {
  std::vector<Index2> e;
  for (int k = 0; k < s; ++k) e.emplace_back(k, k);
  return ZeroPattern(m, n, e);
}

// s zeros in distinct rows and columns at random positions.
ZeroPattern random_diagonal(int m, int n, int s, std::mt19937_64& rng) {
  std::vector<int> rows(m), cols(n);
  for (int i = 0; i < m; ++i) rows[i] = i;
  for (int j = 0; j < n; ++j) cols[j] = j;
  std::shuffle(rows.begin(), rows.end(), rng);
  std::shuffle(cols.begin(), cols.end(), rng);
  std::vector<Index2> e;
  for (int k = 0; k < s; ++k) e.emplace_back(rows[k], cols[k]);
  return ZeroPattern(m, n, e);
}

std::vector<oracle::Cover> as_pairs(const std::vector<MinimalCover>& covers) {
  std::vector<oracle::Cover> out;
  for (const auto& c : covers) out.emplace_back(c.rows, c.cols);
  std::sort(out.begin(), out.end());
  return out;
}

SolutionSet base_solve(int m, int n, int r, const ZeroPattern& S, std::uint64_t seed) {
  Rng rng(seed);
  return monodromy_solve(CriticalSystem::from_pattern(m, n, r, S), TrackerConfig{}, MonodromyOptions{}, rng);
}

SolutionSet target_solve(const SolutionSet& base, const Mat& U, std::uint64_t seed) {
  Rng rng(seed);
  return solve_for_target(base, U.cast<cplx>(), TrackerConfig{}, MonodromyOptions{}, rng);
}

// Shared between criteria: conjugate closure is checked on every real-target solve.
struct ClosureTally {
  int sets = 0;
  int unmatched = 0;
  void add(const SolutionSet& s) {
    ++sets;
    unmatched += unmatched_conjugates(s);
  }
} closure;

// Seed stability is checked on every gated table entry.
struct StabilityTally {
  int instances = 0;
  int unstable = 0;
} stability;

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  int mismatches = 0;
  for (unsigned mask = 0; mask < 512; ++mask) {
    const ZeroPattern S = from_mask(3, 3, mask);
    const auto mc = minimal_covers(S);
    if (mc != covers_bruteforce(S) || as_pairs(mc) != oracle::covers(3, 3, oracle::to_pairs(S))) ++mismatches;
  }
  std::mt19937_64 rng(101);
  for (int t = 0; t < 1000; ++t) {
    const ZeroPattern S = from_mask(4, 4, static_cast<unsigned>(rng() & 0xFFFFu));
    const auto mc = minimal_covers(S);
    if (mc != covers_bruteforce(S) || as_pairs(mc) != oracle::covers(4, 4, oracle::to_pairs(S))) ++mismatches;
  }
  const std::vector<MinimalCover> ex1 = {{{}, {0, 1}}, {{0}, {1}}, {{0, 1}, {}}};
  const std::vector<MinimalCover> ex2 = {{{}, {0, 1}}, {{0}, {}}};
  const bool worked = minimal_covers(ZeroPattern::from_one_based(3, 3, {{1, 1}, {1, 2}, {2, 2}})) == ex1 &&
                      minimal_covers(ZeroPattern::from_one_based(3, 4, {{1, 1}, {1, 2}})) == ex2;
  o.pass = mismatches == 0 && worked;
  o.detail = (Detail() << "1512 patterns, mismatches=" << mismatches << ", worked examples "
                       << (worked ? "reproduced" : "differ"))
                 .str();
  return o;
}

Outcome criterion2() {
  Outcome o;
  long long checked = 0, mismatches = 0;
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n)
      for (unsigned mask = 1; mask < (1u << (m * n)); ++mask) {
        if (__builtin_popcount(mask) > 4) continue;
        const ZeroPattern S = from_mask(m, n, mask);
        const int s = static_cast<int>(S.size());
        const long long got = rank1_ed_degree(S);
        if (is_row_type(S)) {
          ++checked;
          if (got != oracle::row_zeros(s, m, n) || got != rank1_ed_degree_closed_form(PatternKind::Row, s, m, n))
            ++mismatches;
        }
        if (is_column_type(S)) {
          ++checked;
          if (got != oracle::col_zeros(s, m, n) || got != rank1_ed_degree_closed_form(PatternKind::Column, s, m, n))
            ++mismatches;
        }
        if (is_diagonal_type(S)) {
          ++checked;
          if (got != oracle::diag_zeros(s, m, n) || got != rank1_ed_degree_closed_form(PatternKind::Diagonal, s, m, n))
            ++mismatches;
        }
      }
  std::mt19937_64 rng(202);
  int mono_mismatch = 0;
  std::string first;
  for (int t = 0; t < 20; ++t) {
    const int m = 3 + static_cast<int>(rng() % 2), n = 3 + static_cast<int>(rng() % 2);
    ZeroPattern S;
    do {
      S = oracle::random_pattern(m, n, 4, rng);
    } while (S.empty());
    const int count = base_solve(m, n, 1, S, 300 + t).count();
    if (count != rank1_ed_degree(S) || count != oracle::rank1_count(m, n, oracle::to_pairs(S))) {
      ++mono_mismatch;
      if (first.empty()) first = (Detail() << " first: " << S.to_string() << " got " << count).str();
    }
  }
  o.pass = mismatches == 0 && mono_mismatch == 0;
  o.detail = (Detail() << checked << " closed-form checks, mismatches=" << mismatches
                       << "; monodromy 20 instances, mismatches=" << mono_mismatch << first)
                 .str();
  return o;
}

struct TableEntry {
  int m, n, r;
  ZeroPattern S;
  int expected;
  std::string label;
};

Outcome table_run(const std::vector<TableEntry>& entries, bool gated) {
  Outcome o;
  Detail d;
  for (const auto& e : entries) {
    const EdDegreeReport rep = ed_degree(e.m, e.n, e.r, e.S, TrackerConfig{}, 3, 7000 + e.expected);
    const bool ok = rep.count == e.expected && !rep.unstable;
    if (gated) {
      ++stability.instances;
      if (rep.unstable) ++stability.unstable;
    }
    if (!ok) o.pass = false;
    d << e.label << "=" << rep.count << "[";
    for (std::size_t k = 0; k < rep.run_counts.size(); ++k) d << (k ? "," : "") << rep.run_counts[k];
    d << "]" << (ok ? "" : "(expected " + std::to_string(e.expected) + ")") << " ";
  }
  o.detail = d.str();
  return o;
}

Outcome criterion3() {
  const std::vector<TableEntry> gated = {
      {3, 3, 2, diagonal(3, 3, 1), 8, "(3,3,2,1z)"},   {3, 4, 2, diagonal(3, 4, 1), 8, "(3,4,2,1z)"},
      {4, 4, 2, diagonal(4, 4, 1), 21, "(4,4,2,1z)"},  {3, 3, 2, diagonal(3, 3, 2), 25, "(3,3,2,2z)"},
      {3, 4, 2, diagonal(3, 4, 2), 29, "(3,4,2,2z)"},  {3, 3, 2, diagonal(3, 3, 3), 30, "(3,3,2,3z)"},
      {3, 3, 2, diagonal(3, 3, 1), 8, "corank1(n=3)"}, {4, 4, 3, diagonal(4, 4, 1), 13, "corank1(n=4)"}};
  return table_run(gated, true);
}

Outcome criterion4() {
  Outcome o;
  Detail d;
  Mat U(3, 4);
  U << 1, -1, -2, -2, 1, 0, 1, -2, 2, 0, 0, 2;
  Mat X(3, 4);
  X << 0, 0, -0.627896, -2.36438, 0, 0, -0.430261, -1.62017, 0, 0, 0.496139, 1.86824;
  const SelectionResult r1 = best_rank1_structured(U, ZeroPattern::from_one_based(3, 4, {{1, 1}, {1, 2}}));
  const double e1 = (r1.best.X - X).cwiseAbs().maxCoeff();
  const bool ok1 = e1 < 5e-6;
  d << "3x4 rank-one max|dX|=" << e1 << (ok1 ? " ok" : " FAIL") << "; ";

  Mat B(3, 3);
  B << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  const auto SB = ZeroPattern::from_one_based(3, 3, {{1, 3}, {2, 3}, {3, 1}, {3, 2}});
  std::vector<Block> blocks;
  bool ok2 = block_diagonal_complement(SB, blocks);
  Mat C1(3, 3), C2(3, 3), C3(3, 3);
  C1 << 1, 2, 0, 4, 5, 0, 0, 0, 0;
  C2 << 1.3332, 1.7455, 0, 3.8857, 5.0873, 0, 0, 0, 9;
  C3 << -0.3332, 0.2545, 0, 0.1143, -0.0873, 0, 0, 0, 9;
  if (ok2) {
    const auto pts = block_diagonal_rank_r(B, blocks, 2);
    for (const Mat* C : {&C1, &C2, &C3}) {
      bool found = false;
      for (const auto& p : pts) found = found || (p.X - *C).cwiseAbs().maxCoeff() < 5e-5;
      ok2 = ok2 && found;
    }
    ok2 = ok2 && pts.size() == 3 && (select_best(pts).best.X - C2).cwiseAbs().maxCoeff() < 5e-5;
  }
  d << "block example C1,C2,C3 " << (ok2 ? "reproduced, C2 selected" : "FAIL") << "; ";

  Mat T(3, 3);
  T << 78.57, 93.47, 51.33, -58.54, -7.64, 34.34, 53.53, -89.96, -87.14;
  const SolutionSet set = target_solve(base_solve(3, 3, 2, diagonal(3, 3, 1), 401), T, 402);
  closure.add(set);
  int real = 0;
  for (const auto& s : set.solutions) real += s.is_real ? 1 : 0;
  const int pairs = (set.count() - real) / 2;
  const bool ok3 = set.count() == 8 && real == 4 && pairs == 2 && unmatched_conjugates(set) == 0;
  d << "table matrix: " << set.count() << " solutions, " << real << " real, " << pairs << " conjugate pairs";
  o.pass = ok1 && ok2 && ok3;
  o.detail = d.str();
  return o;
}

Outcome criterion5() {
  Outcome o;
  const std::vector<std::pair<int, int>> shapes = {{3, 3}, {3, 4}, {4, 3}, {3, 5}};
  std::mt19937_64 rng(505);
  struct Inst {
    int m, n, r;
    ZeroPattern S;
  };
  std::vector<Inst> insts;
  for (int k = 0; k < 32; ++k) {
    const auto [m, n] = shapes[k % 4];
    const int r = 1 + (k / 4) % 2;
    const int s = (k / 8) % 4;
    insts.push_back({m, n, r, random_diagonal(m, n, s, rng)});
  }
  insts.push_back({4, 4, 2, random_diagonal(4, 4, 1, rng)});
  insts.push_back({4, 4, 3, random_diagonal(4, 4, 1, rng)});

  int solved = 0, theorem_failures = 0, incomplete = 0;
  double worst_ratio = 0.0;
  std::string first;
  for (std::size_t k = 0; k < insts.size(); ++k) {
    const auto& in = insts[k];
    const SolutionSet base = base_solve(in.m, in.n, in.r, in.S, 600 + k);
    const SolutionSet set = target_solve(base, gaussian(in.m, in.n, rng), 700 + k);
    closure.add(set);
    if (set.count() != base.count()) ++incomplete;
    ++solved;
    const VerificationReport rep = verify_instance(set, in.S, in.r);
    for (const auto& c : rep.theorem_checks)
      if (!c.pass) {
        ++theorem_failures;
        if (first.empty()) first = " first failure: " + c.name + " at " + rep.instance;
      }
    const SpanInclusionReport span = verify_span_inclusion(set, critical_space(CMat(set.U), in.S));
    worst_ratio = std::max(worst_ratio, span.max_ratio);
  }

  // affine relation on every EY point, every r, every column subset
  int affine_checked = 0, affine_fail = 0;
  for (const auto& [m0, n0] : shapes) {
    for (int t = 0; t < 5; ++t) {
      const int m = std::min(m0, n0), n = std::max(m0, n0);
      const Mat U = gaussian(m, n, rng);
      for (int r = 1; r < m; ++r)
        for (const auto& p : eckart_young_points(U, r)) {
          std::vector<int> I(m);
          for (unsigned mask = 0; mask < (1u << n); ++mask) {
            if (__builtin_popcount(mask) != m) continue;
            int c = 0;
            for (int j = 0; j < n; ++j)
              if ((mask >> j) & 1u) I[c++] = j;
            ++affine_checked;
            const double bound = 1e-8 * std::pow(U.norm() + p.X.norm(), m);
            if (affine_relation_residual(p.X.cast<cplx>(), U.cast<cplx>(), I, r) > bound) ++affine_fail;
          }
        }
    }
  }

  // codimension formula, 20 random U per instance shape
  int codim_checked = 0, codim_fail = 0;
  for (const auto& in : insts) {
    for (int t = 0; t < 20; ++t) {
      ++codim_checked;
      if (critical_space(gaussian(in.m, in.n, rng), in.S).codimension != codim_formula(in.S)) ++codim_fail;
    }
  }
  o.pass = theorem_failures == 0 && affine_fail == 0 && codim_fail == 0 && solved >= 30;
  o.detail = (Detail() << solved << " instances (" << incomplete << " target solves short), theorem failures="
                       << theorem_failures << ", worst span ratio=" << worst_ratio << "; affine " << affine_checked
                       << " checks, failures=" << affine_fail << "; codim " << codim_checked
                       << " checks, failures=" << codim_fail << first)
                 .str();
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(606);
  Detail d;
  int violations = 0, solutions = 0;
  for (int rank_v = 0; rank_v <= 3; ++rank_v) {
    Mat V = Mat::Zero(3, 3);
    if (rank_v > 0) V = gaussian(3, rank_v, rng) * gaussian(rank_v, 3, rng);
    Rng r(800 + rank_v);
    const SolutionSet base =
        monodromy_solve(corank_one_general_constraint(3, V), TrackerConfig{}, MonodromyOptions{}, r);
    d << "rank V=" << rank_v << ": " << base.count() << " solutions ";
    for (int t = 0; t < 5; ++t) {
      const Mat U = gaussian(3, 3, rng);
      const SolutionSet set = target_solve(base, U, 900 + 10 * rank_v + t);
      closure.add(set);
      std::vector<CMat> xs;
      for (const auto& s : set.solutions) xs.push_back(s.X);
      solutions += static_cast<int>(xs.size());
      const RankDropReport rep = corank_one_rank_drop_check(3, V, U.cast<cplx>(), xs);
      violations += static_cast<int>(rep.violations.size());
      if (!rep.pass && rep.violations.empty()) ++violations;
    }
  }
  o.pass = violations == 0;
  o.detail = (Detail() << d.str() << "; " << solutions << " solutions checked, violations=" << violations).str();
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(707);
  int instances = 0, mismatch = 0;
  double worst = 0.0;
  auto compare = [&](const SolutionSet& base, const Mat& U, double spectral, std::uint64_t seed) {
    const SolutionSet set = target_solve(base, U, seed);
    closure.add(set);
    const double h = classify_real(set, U).minimizer.distance_sq;
    const double rel = std::abs(h - spectral) / std::max(spectral, 1e-300);
    worst = std::max(worst, rel);
    ++instances;
    if (rel > 1e-8) ++mismatch;
  };
  // rank one, random patterns
  for (int p = 0; p < 5; ++p) {
    const int n = 3 + p % 2;
    ZeroPattern S;
    do {
      S = oracle::random_pattern(3, n, 3, rng);
    } while (S.empty());
    const SolutionSet base = base_solve(3, n, 1, S, 1000 + p);
    for (int t = 0; t < 4; ++t) {
      const Mat U = gaussian(3, n, rng);
      compare(base, U, best_rank1_structured(U, S).best.distance_sq, 1100 + 10 * p + t);
    }
  }
  // rank two, block-diagonal complement
  {
    const auto S = ZeroPattern::from_one_based(3, 3, {{1, 3}, {2, 3}, {3, 1}, {3, 2}});
    std::vector<Block> blocks;
    block_diagonal_complement(S, blocks);
    const SolutionSet base = base_solve(3, 3, 2, S, 1200);
    for (int t = 0; t < 10; ++t) {
      const Mat U = gaussian(3, 3, rng);
      compare(base, U, select_best(block_diagonal_rank_r(U, blocks, 2)).best.distance_sq, 1300 + t);
    }
  }
  // rank one, rectangular complement (third row zero)
  {
    const auto S = ZeroPattern::from_one_based(3, 4, {{3, 1}, {3, 2}, {3, 3}, {3, 4}});
    const SolutionSet base = base_solve(3, 4, 1, S, 1400);
    for (int t = 0; t < 10; ++t) {
      const Mat U = gaussian(3, 4, rng);
      compare(base, U, select_best(rectangular_rank_r(U, S, 1)).best.distance_sq, 1500 + t);
    }
  }
  // rank two, no pattern
  {
    const SolutionSet base = base_solve(3, 4, 2, ZeroPattern(3, 4), 1600);
    for (int t = 0; t < 10; ++t) {
      const Mat U = gaussian(3, 4, rng);
      compare(base, U, eckart_young_points(U, 2).front().distance_sq, 1700 + t);
    }
  }

  // nonnegative rank two versus restarted NMF
  const NonnegRank2Solver solver(4242);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int nn_runs = 0, beaten = 0;
  double worst_gap = -INFINITY;
  for (int t = 0; t < 100; ++t) {
    Mat U(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) U(i, j) = uni(rng);
    Rng r(derive_seed(4243, t));
    const NnApproxResult res = solver.best_nonneg_rank2(U, r);
    const double nmf = oracle::nmf_rank2(U, 100, rng);
    const double gap = (res.distance_sq - nmf) / std::max(nmf, 1e-300);
    worst_gap = std::max(worst_gap, gap);
    ++nn_runs;
    if (gap > 1e-6) ++beaten;
  }
  o.pass = mismatch == 0 && beaten == 0 && instances >= 50;
  o.detail = (Detail() << instances << " homotopy/spectral pairs, worst rel diff=" << worst << ", mismatches="
                       << mismatch << "; " << nn_runs << " nnrank2 runs, beaten by NMF=" << beaten
                       << ", max (d_nn - d_nmf)/d_nmf=" << worst_gap)
                 .str();
  return o;
}

Outcome criterion8() {
  Outcome o;
  const NonnegRank2Solver solver(8080);
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  NnOptions full;
  full.short_circuit = false;
  int census_bad = 0;
  for (int t = 0; t < 5; ++t) {
    Mat U(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) U(i, j) = uni(rng);
    Rng r(t);
    std::array<FamilyCensus, kNnFamilies> census{};
    solver.enumerate_candidates(U, r, &census);
    for (int f = 0; f < kNnFamilies; ++f)
      if (census[f].generated != candidate_families()[f].expected_count) ++census_bad;
  }
  const ExperimentSummary s = sampling_experiment(solver, 1000, 8181);
  const double p0 = s.proportion(0), p1 = s.proportion(1), p2 = s.proportion(2);
  const bool in_range = p0 >= 0.80 && p0 <= 0.95 && p1 >= 0.05 && p1 <= 0.17 && p2 >= 0.0 && p2 <= 0.03;
  o.pass = census_bad == 0 && in_range && s.obs_a_violations == 0;
  o.detail = (Detail() << "census on 5 generic inputs, family mismatches=" << census_bad << "; 1000 samples p0=" << p0
                       << " p1=" << p1 << " p2=" << p2 << ", obs(a) violations=" << s.obs_a_violations
                       << ", obs(b) holds/fails=" << s.obs_b_holds << "/" << s.obs_b_fails
                       << ", failures=" << s.failures << ", incomplete=" << s.incomplete)
                 .str();
  return o;
}

Outcome criterion9() {
  Outcome o;
  // transpose invariance
  std::mt19937_64 rng(909);
  int transpose_bad = 0, transpose_checked = 0;
  const std::vector<std::tuple<int, int, int, ZeroPattern>> tcases = {
      {3, 4, 2, diagonal(3, 4, 1)}, {3, 4, 2, diagonal(3, 4, 2)}, {3, 4, 1, ZeroPattern(3, 4, {{0, 0}, {0, 3}})},
      {3, 5, 2, diagonal(3, 5, 1)}, {3, 4, 1, ZeroPattern(3, 4, {{1, 2}, {2, 0}, {2, 3}})}};
  for (std::size_t k = 0; k < tcases.size(); ++k) {
    const auto& [m, n, r, S] = tcases[k];
    const int a = ed_degree(m, n, r, S, TrackerConfig{}, 1, 950 + k).count;
    const int b = ed_degree(n, m, r, S.transposed(), TrackerConfig{}, 1, 960 + k).count;
    ++transpose_checked;
    if (a != b) ++transpose_bad;
  }
  // Jacobian finite differences on 100 random points
  Rng crng(910);
  double worst_fd = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int m = 3, n = 3 + t % 2, r = 1 + t % 2;
    const CriticalSystem sys = CriticalSystem::from_pattern(m, n, r, oracle::random_pattern(m, n, 3, rng));
    const CVec v = random_complex_vector(sys.num_variables(), crng);
    const CVec u = random_complex_vector(m * n, crng);
    const CMat J = sys.jacobian(sys.unpack(v), u);
    CMat Jfd(J.rows(), J.cols());
    const double h = 1e-7;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      CVec vp = v, vm = v;
      vp(k) += h;
      vm(k) -= h;
      Jfd.col(k) = (sys.evaluate(sys.unpack(vp), u) - sys.evaluate(sys.unpack(vm), u)) / (2 * h);
    }
    worst_fd = std::max(worst_fd, (J - Jfd).norm() / J.norm());
  }
  o.pass = closure.unmatched == 0 && transpose_bad == 0 && worst_fd <= 1e-6 && stability.unstable == 0 &&
           stability.instances > 0;
  o.detail = (Detail() << "conjugate closure over " << closure.sets << " real-target sets, unmatched="
                       << closure.unmatched << "; transpose " << transpose_checked << " cases, mismatches="
                       << transpose_bad << "; Jacobian FD worst rel=" << worst_fd << "; seed stability "
                       << stability.instances << " gated instances, unstable=" << stability.unstable)
                 .str();
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                          criterion6, criterion7, criterion8, criterion9};
  // wall-clock limits in seconds where a criterion states one
  const double none = INFINITY;
  const std::vector<double> budgets = {10, none, 1800, none, none, none, none, none, none};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budgets[k]) {
      o.pass = false;
      o.detail += " (over time budget)";
    }
    std::printf("CRITERION %zu %s [%.1fs] %s\n", k + 1, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  if (const char* s = std::getenv("LRAZ_STRETCH"); s && std::string(s) == "1") {
    const std::vector<TableEntry> stretch = {{4, 4, 2, diagonal(4, 4, 2), 85, "(4,4,2,2z)"},
                                             {3, 4, 2, diagonal(3, 4, 3), 62, "(3,4,2,3z)"}};
    const Outcome o = table_run(stretch, false);
    std::printf("STRETCH (not gated) %s %s\n", o.pass ? "MATCH" : "DIFFER", o.detail.c_str());
  }
  std::printf("%s: %d of %zu criteria failed\n", failures ? "FAILED" : "PASSED", failures, criteria.size());
  return failures ? 1 : 0;
}
