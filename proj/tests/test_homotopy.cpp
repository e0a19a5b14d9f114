#include <gtest/gtest.h>

#include <random>

#include "lraz/errors.hpp"
#include "lraz/homotopy.hpp"
#include "lraz/spectral.hpp"
#include "support.hpp"

using namespace lraz;

namespace {

SolutionSet solve(int m, int n, int r, const ZeroPattern& S, std::uint64_t seed) {
  Rng rng(seed);
  return monodromy_solve(CriticalSystem::from_pattern(m, n, r, S), TrackerConfig{}, MonodromyOptions{}, rng);
}

Mat gaussian(int m, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Mat U(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) U(i, j) = g(rng);
  return U;
}

}  // namespace

TEST(Tracker, ConfigValidation) {
  TrackerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.min_step = 1.0;
  EXPECT_THROW(cfg.validate(), ContractViolation);
}

TEST(Tracker, GammaStaysInTheRightHalfPlane) {
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const cplx g = random_gamma(rng);
    EXPECT_NEAR(std::abs(g), 1.0, 1e-12);
    EXPECT_GT(g.real(), 0.0);
  }
  ParameterPath path;
  path.pa = CVec::Zero(2);
  path.pb = CVec::Ones(2);
  path.gamma = cplx(0.6, 0.8);
  EXPECT_LT((path.at(0.0) - path.pa).norm(), 1e-15);
  EXPECT_LT((path.at(1.0) - path.pb).norm(), 1e-15);
  const double h = 1e-6;
  EXPECT_LT((path.derivative(0.4) - (path.at(0.4 + h) - path.at(0.4 - h)) / (2 * h)).norm(), 1e-7);
}

TEST(Tracker, TracksEckartYoungPointsBetweenRealTargets) {
  // Rank-one points of 3 x 3 matrices: three critical points, tracked between two diagonal targets.
  Rng rng(7);
  const auto full = CriticalSystem::from_pattern(3, 3, 1, ZeroPattern(3, 3));
  const Mat N = constraint_basis(3, 3, full.constraints());
  ReducedSystem sys = ReducedSystem::with_random_chart(3, 3, 1, N, rng);
  Mat Ua = Mat::Zero(3, 3), Ub = Mat::Zero(3, 3);
  Ua.diagonal() << 3, 2, 1;
  Ub.diagonal() << 1, 5, 4;
  CMat X0 = CMat::Zero(3, 3);
  X0(0, 0) = 3.0;
  sys.adapt_to_component(X0, rng);
  ParameterPath path;
  path.pa = sys.params(Ua.cast<cplx>());
  path.pb = sys.params(Ub.cast<cplx>());
  path.gamma = random_gamma(rng);
  const PathResult res = track(sys, X0, path, TrackerConfig{});
  ASSERT_TRUE(res.ok()) << to_string(res.status);
  // the endpoint is one of the three rank-one truncations of diag(1, 5, 4)
  bool found = false;
  for (int k = 0; k < 3; ++k) {
    CMat E = CMat::Zero(3, 3);
    E(k, k) = Ub(k, k);
    found = found || (res.X - E).norm() < 1e-8;
  }
  EXPECT_TRUE(found) << res.X;
}

TEST(Monodromy, UnstructuredCountsAreBinomial) {
  EXPECT_EQ(solve(3, 3, 1, ZeroPattern(3, 3), 1).count(), 3);
  EXPECT_EQ(solve(3, 3, 2, ZeroPattern(3, 3), 1).count(), 3);
  EXPECT_EQ(solve(3, 4, 2, ZeroPattern(3, 4), 1).count(), 3);
}

TEST(Monodromy, RankOneCountsMatchCovers) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 6; ++t) {
    const ZeroPattern S = oracle::random_pattern(3, 3, 3, rng);
    EXPECT_EQ(solve(3, 3, 1, S, 100 + t).count(), oracle::rank1_count(3, 3, oracle::to_pairs(S))) << S.to_string();
  }
}

TEST(Monodromy, SingleZeroRankTwo) {
  const SolutionSet set = solve(3, 3, 2, ZeroPattern(3, 3, {{0, 0}}), 3);
  EXPECT_EQ(set.count(), 8);
  EXPECT_FALSE(set.trace_test_run);
  for (const auto& s : set.solutions) {
    EXPECT_LT(std::abs(s.X(0, 0)), 1e-10);
    EXPECT_EQ(oracle::rank_of(s.X, 1e-8), 2);
    EXPECT_LT(s.residual, 1e-8);
  }
}

TEST(Monodromy, BaseMoveKeepsTheSetOnItsParameter) {
  const CriticalSystem sys = CriticalSystem::from_pattern(3, 3, 2, ZeroPattern(3, 3, {{0, 0}}));
  for (int moves : {0, 1}) {
    MonodromyOptions opts;
    opts.base_moves = moves;
    Rng rng(21);
    const SolutionSet set = monodromy_solve(sys, TrackerConfig{}, opts, rng);
    EXPECT_EQ(set.count(), 8);
    EXPECT_EQ(set.stats.base_moves, moves);
    // residuals are evaluated on the literal system at the final base
    for (const auto& s : set.solutions) EXPECT_LT(s.residual, 1e-8);
  }
}

TEST(Monodromy, CorankOneFourByFourReachesThirteen) {
  // with this seed the first base holds a critical point close to infinity
  EXPECT_EQ(solve(4, 4, 3, ZeroPattern(4, 4, {{0, 0}}), 53).count(), 13);
}

TEST(Monodromy, TargetSolveGivesRealConjugateStructure) {
  const ZeroPattern S(3, 3, {{0, 0}});
  const SolutionSet base = solve(3, 3, 2, S, 5);
  Mat U(3, 3);
  U << 78.57, 93.47, 51.33, -58.54, -7.64, 34.34, 53.53, -89.96, -87.14;
  Rng rng(6);
  const SolutionSet target = solve_for_target(base, U.cast<cplx>(), TrackerConfig{}, MonodromyOptions{}, rng);
  ASSERT_EQ(target.count(), 8);
  int real = 0;
  for (const auto& s : target.solutions) real += s.is_real ? 1 : 0;
  EXPECT_EQ(real, 4);
  EXPECT_EQ(unmatched_conjugates(target), 0);
  const RealClassification cls = classify_real(target, U);
  EXPECT_EQ(cls.points.size(), 4u);
  EXPECT_EQ(cls.minimizer.X(0, 0), 0.0);
  for (std::size_t k = 1; k < cls.points.size(); ++k)
    EXPECT_LE(cls.points[k - 1].distance_sq, cls.points[k].distance_sq);
}

TEST(Monodromy, HomotopyAgreesWithSpectralRankOne) {
  const ZeroPattern S(3, 4, {{0, 0}, {0, 1}});
  const SolutionSet base = solve(3, 4, 1, S, 8);
  ASSERT_EQ(base.count(), rank1_ed_degree(S));
  for (int t = 0; t < 3; ++t) {
    const Mat U = gaussian(3, 4, 40 + t);
    Rng rng(t);
    const SolutionSet target = solve_for_target(base, U.cast<cplx>(), TrackerConfig{}, MonodromyOptions{}, rng);
    const double d_h = classify_real(target, U).minimizer.distance_sq;
    const double d_s = best_rank1_structured(U, S).best.distance_sq;
    EXPECT_NEAR(d_h, d_s, 1e-8 * d_s);
  }
}

TEST(EdDegree, RepeatsAgreeAndEnvelopeIsReported) {
  const EdDegreeReport rep = ed_degree(3, 3, 2, ZeroPattern(3, 3, {{0, 0}}), TrackerConfig{}, 3, 99);
  EXPECT_EQ(rep.count, 8);
  EXPECT_EQ(rep.run_counts, (std::vector<int>{8, 8, 8}));
  EXPECT_FALSE(rep.unstable);
  EXPECT_FALSE(rep.beyond_envelope);
  EXPECT_TRUE(in_validated_envelope(4, 4, 3, ZeroPattern(4, 4, {{0, 0}})));
  EXPECT_FALSE(in_validated_envelope(5, 5, 2, ZeroPattern(5, 5, {{0, 0}})));
}

TEST(EdDegree, TransposeInvariance) {
  const ZeroPattern S(3, 4, {{0, 0}, {1, 1}});
  const int a = ed_degree(3, 4, 2, S, TrackerConfig{}, 1, 5).count;
  const int b = ed_degree(4, 3, 2, S.transposed(), TrackerConfig{}, 1, 5).count;
  EXPECT_EQ(a, 29);
  EXPECT_EQ(a, b);
}
