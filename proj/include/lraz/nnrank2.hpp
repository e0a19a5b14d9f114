#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lraz/homotopy.hpp"
#include "lraz/patterns.hpp"
#include "lraz/types.hpp"

namespace lraz {

// Best nonnegative rank-2 approximation of 3 x 3 nonnegative matrices by
// enumerating the critical points of the boundary strata.

enum class NnFamily { SvdPairs = 0, DiagonalPattern, RowColZero, Rank1Submatrix, ZeroBlock };
constexpr int kNnFamilies = 5;

std::string to_string(NnFamily f);

struct CandidateFamily {
  NnFamily family;
  std::vector<ZeroPattern> representatives;  // orbit representatives (0-based)
  int expected_count = 0;
};

// The five families with expected counts 3, 702, 6, 36, 9.
const std::vector<CandidateFamily>& candidate_families();

struct NnCandidate {
  NnFamily family = NnFamily::SvdPairs;
  ZeroPattern pattern;  // structural zeros of the stratum
  CMat X;
  bool is_real = false;
};

struct FamilyCensus {
  int expected = 0;
  int generated = 0;
  int real = 0;
  int nonnegative = 0;
  int discarded = 0;  // generated - nonnegative
  bool complete = true;
  bool skipped = false;  // not enumerated because the interior optimum is feasible
};

struct NnApproxResult {
  Mat best;
  double distance_sq = 0.0;
  ZeroPattern zero_pattern;
  NnFamily family = NnFamily::SvdPairs;
  std::array<FamilyCensus, kNnFamilies> census{};
  bool interior = false;    // best is the nonnegative SVD truncation
  bool incomplete = false;  // some family produced fewer candidates than expected
  bool tie = false;
  std::vector<std::string> warnings;
};

struct NnOptions {
  double tau_nn = 1e-9;       // relative to ||U||_F
  double tie = 1e-10;         // relative to max(1, distance)
  bool short_circuit = true;  // accept a nonnegative SVD truncation without enumeration
};

class NonnegRank2Solver {
 public:
  // Runs one monodromy solve per diagonal-pattern representative.
  explicit NonnegRank2Solver(std::uint64_t seed, TrackerConfig cfg = {}, MonodromyOptions opts = {});

  // Complex candidates of all five families; census counts generated and real candidates.
  std::vector<NnCandidate> enumerate_candidates(const Mat& U, Rng& rng,
                                                std::array<FamilyCensus, kNnFamilies>* census = nullptr) const;

  NnApproxResult best_nonneg_rank2(const Mat& U, Rng& rng, const NnOptions& opts = {}) const;

  // Solution counts of the three base sets (8, 25, 30 when complete).
  std::vector<int> base_counts() const;

 private:
  struct Member {
    ZeroPattern pattern;
    int base = 0;
    PatternMap map;  // carries the base representative onto pattern
  };
  TrackerConfig cfg_;
  MonodromyOptions opts_;
  std::vector<SolutionSet> bases_;
  std::vector<int> expected_;
  std::vector<Member> members_;
};

// Applies a pattern map to a matrix: entry (i, j) of (transposed) M moves to (rp[i], cp[j]).
CMat apply_pattern_map(const PatternMap& map, const CMat& M);
CMat apply_inverse_pattern_map(const PatternMap& map, const CMat& Y);

struct SampleRecord {
  int id = 0;
  int zeros = 0;
  ZeroPattern pattern;
  std::string obs_b;  // "na", "holds" or "fails"
  bool obs_a_violation = false;
  bool failed = false;
  bool incomplete = false;
  bool interior = false;
};

struct ExperimentSummary {
  int count = 0;
  std::array<int, 10> zero_histogram{};  // index = number of zeros of the optimum
  int failures = 0;
  int incomplete = 0;
  int interior = 0;
  int obs_a_violations = 0;
  int obs_b_holds = 0;
  int obs_b_fails = 0;
  std::vector<SampleRecord> records;
  double proportion(int zeros) const;
};

// Uniform samples from {U >= 0, sum U = 1000} (Dirichlet(1, ..., 1) scaled);
// sample k draws from a stream derived from (seed, k).
ExperimentSummary sampling_experiment(const NonnegRank2Solver& solver, int count, std::uint64_t seed,
                                      int threads = 1, const NnOptions& opts = {});

Mat sample_scaled_simplex(Rng& rng, double total = 1000.0);

}  // namespace lraz
