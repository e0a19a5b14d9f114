#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lraz/critical_system.hpp"
#include "lraz/reduced_system.hpp"
#include "lraz/tracker.hpp"

namespace lraz {

struct CriticalSolution {
  CMat X;
  CVec lambda;  // multipliers of the literal system (least-squares lift)
  CVec mu;
  double residual = 0.0;  // literal system residual norm
  bool is_real = false;
  cplx distance_sq{0.0, 0.0};  // <U - X, U - X> without conjugation
  double contraction = 0.0;
  double condition = 0.0;
  int component = 0;  // index of the tracking system the solution belongs to
};

struct MonodromyStats {
  int loops = 0;
  int loops_since_new = 0;
  int paths_tracked = 0;
  int path_failures = 0;
  int components = 0;
  int seeds_tried = 0;
  int base_moves = 0;
};

// Tracking systems shared between a base solution set and its transports.
struct SolverContext {
  int m = 0, n = 0, r = 0;
  std::vector<Mat> constraints;
  Mat basis;
  std::vector<ReducedSystem> components;
};

struct SolutionSet {
  std::shared_ptr<const SolverContext> context;
  CMat U;  // parameter point of the solutions
  std::vector<CriticalSolution> solutions;
  MonodromyStats stats;
  bool trace_test_run = false;  // the optional trace test is not performed
  std::vector<std::string> warnings;
  int count() const { return static_cast<int>(solutions.size()); }
};

struct MonodromyOptions {
  int stable_loops = 10;  // consecutive loops with no new solution before stopping
  int max_loops = 400;
  int retry_cap = 5;
  int base_moves = 1;     // moves of the whole set to a fresh base parameter
  int seed_orders = 400;  // random vertex orders tried when seeding zero-pattern components
  int threads = 1;
  bool lift_multipliers = true;
};

struct Tolerances {
  double dedup = 1e-6;      // relative x-distance, scaled by 1 + ||x||
  double real = 1e-8;       // imaginary part bound, scaled by 1 + ||X||
  double rank = 1e-8;       // sigma_{r+1} / sigma_1 bound for genuine rank-r points
  double residual = 1e-9;
};

std::optional<ZeroPattern> as_zero_pattern(const CriticalSystem& system);

// Rank-r points on the distinct components reached by greedy bilinear
// factor assignment (zero patterns) or random factor projection (general constraints).
std::vector<CMat> component_seeds(const CriticalSystem& system, Rng& rng, int orders);

SolutionSet monodromy_solve(const CriticalSystem& system, const TrackerConfig& cfg, const MonodromyOptions& opts,
                            Rng& rng, const Tolerances& tol = {});

SolutionSet solve_for_target(const SolutionSet& base, const CMat& U_target, const TrackerConfig& cfg,
                             const MonodromyOptions& opts, Rng& rng, const Tolerances& tol = {});

struct EdDegreeReport {
  int count = 0;
  std::vector<int> run_counts;
  bool unstable = false;
  bool beyond_envelope = false;
  std::vector<std::string> warnings;
};

EdDegreeReport ed_degree(int m, int n, int r, const ZeroPattern& S, const TrackerConfig& cfg, int repeats,
                         std::uint64_t seed, const MonodromyOptions& opts = {});

bool in_validated_envelope(int m, int n, int r, const ZeroPattern& S);

struct RealPoint {
  Mat X;
  double distance_sq = 0.0;
  double residual = 0.0;
  int source = 0;  // index into the solution set
};

struct RealClassification {
  std::vector<RealPoint> points;  // sorted by distance_sq
  RealPoint minimizer;
};

RealClassification classify_real(const SolutionSet& solutions, const Mat& U, const Tolerances& tol = {});

// Number of non-real solutions without a conjugate partner in the set.
int unmatched_conjugates(const SolutionSet& solutions, const Tolerances& tol = {});

struct PathOutcome {
  PathStatus status = PathStatus::Success;
  SystemPoint point;
  double residual = 0.0;
};

// Continuation of one solution of the literal system from U_from to U_to.
PathOutcome track_path(const CriticalSystem& system, const SystemPoint& start, const CVec& U_from, const CVec& U_to,
                       const TrackerConfig& cfg, Rng& rng);

}  // namespace lraz
