#pragma once

#include <string>
#include <vector>

#include "lraz/patterns.hpp"
#include "lraz/types.hpp"

namespace lraz {

struct SvdFactors {
  Mat A;      // m x m orthogonal, columns a_i
  Vec sigma;  // min(m, n) values, nonincreasing
  Mat B;      // n x n orthogonal, columns b_i
};

// Full SVD with each a_i normalised so that its first nonzero entry is positive.
SvdFactors svd(const Mat& U);

struct RealCriticalPoint {
  Mat X;
  double distance_sq = 0.0;
  std::string provenance;
};

struct SpectralTolerances {
  double separation = 1e-9;  // relative to sigma_1
  double rank = 1e-9;        // relative to sigma_1
};

// One critical point per r-subset of the nonzero singular values, subsets in
// lexicographic order (the first is the global minimiser). Requires
// 1 <= r <= rank(U) and pairwise distinct nonzero singular values.
std::vector<RealCriticalPoint> eckart_young_points(const Mat& U, int r, const SpectralTolerances& tol = {});

struct SelectionResult {
  RealCriticalPoint best;
  std::vector<RealCriticalPoint> all;
  bool tie = false;  // another candidate within 1e-12 of the best distance
};

// Rank-one structured approximation through the minimal covers of S.
SelectionResult best_rank1_structured(const Mat& U, const ZeroPattern& S, const SpectralTolerances& tol = {});

struct Block {
  std::vector<int> rows;
  std::vector<int> cols;
};

// Complement of S equal to rows x cols; false otherwise.
bool rectangular_complement(const ZeroPattern& S, Block& block);
// Complement of S equal to a disjoint union of full rectangles; false otherwise.
bool block_diagonal_complement(const ZeroPattern& S, std::vector<Block>& blocks);

std::vector<RealCriticalPoint> rectangular_rank_r(const Mat& U, const ZeroPattern& S, int r,
                                                  const SpectralTolerances& tol = {});

std::vector<RealCriticalPoint> block_diagonal_rank_r(const Mat& U, const std::vector<Block>& blocks, int r,
                                                     const SpectralTolerances& tol = {});

Mat project_onto_pattern(const Mat& U, const ZeroPattern& S);

// Minimum distance; near-ties within 1e-12 resolve to the earliest candidate in list order.
SelectionResult select_best(std::vector<RealCriticalPoint> points);

}  // namespace lraz
