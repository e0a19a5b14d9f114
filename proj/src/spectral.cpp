#include "lraz/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lraz/errors.hpp"
#include "lraz/minors.hpp"

namespace lraz {

SvdFactors svd(const Mat& U) {
  if (!U.allFinite()) throw ContractViolation("svd: matrix has non-finite entries");
  SvdFactors f;
  if (U.size() == 0) {
    f.A = Mat::Identity(U.rows(), U.rows());
    f.B = Mat::Identity(U.cols(), U.cols());
    f.sigma = Vec(0);
    return f;
  }
  Eigen::JacobiSVD<Mat> solver(U, Eigen::ComputeFullU | Eigen::ComputeFullV);
  f.A = solver.matrixU();
  f.B = solver.matrixV();
  f.sigma = solver.singularValues();
  const Eigen::Index k = f.sigma.size();
  for (Eigen::Index c = 0; c < f.A.cols(); ++c) {
    for (Eigen::Index i = 0; i < f.A.rows(); ++i) {
      if (std::abs(f.A(i, c)) > 1e-12) {
        if (f.A(i, c) < 0) {
          f.A.col(c) *= -1.0;
          if (c < k) f.B.col(c) *= -1.0;
        }
        break;
      }
    }
  }
  return f;
}

namespace {

std::string index_list(const std::vector<int>& v) {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i] + 1;
  out << "}";
  return out.str();
}

double distance_sq(const Mat& U, const Mat& X) { return (U - X).squaredNorm(); }

int spectral_rank(const Vec& sigma, const SpectralTolerances& tol) {
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  int k = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > tol.rank * sigma(0)) ++k;
  return k;
}

// Eckart-Young critical points of U (r may be 0, or exceed the rank, in which
// case the list is {0} or empty). Provenance is "svd" plus the subset.
std::vector<RealCriticalPoint> ey_points(const Mat& U, int r, const SpectralTolerances& tol,
                                         const std::string& context) {
  std::vector<RealCriticalPoint> out;
  if (r == 0) {
    out.push_back({Mat::Zero(U.rows(), U.cols()), U.squaredNorm(), "svd{}"});
    return out;
  }
  if (U.size() == 0) return out;
  const SvdFactors f = svd(U);
  const int k = spectral_rank(f.sigma, tol);
  if (r > k) return out;
  for (int i = 0; i + 1 < k; ++i) {
    if (f.sigma(i) - f.sigma(i + 1) <= tol.separation * f.sigma(0)) {
      std::ostringstream msg;
      msg << "non-generic spectrum: singular values " << i + 1 << " and " << i + 2 << " coincide ("
          << f.sigma(i) << ")";
      throw NonGenericSpectrum(msg.str(), context);
    }
  }
  for (const auto& subset : subsets(k, r)) {
    Mat X = Mat::Zero(U.rows(), U.cols());
    for (int i : subset) X += f.sigma(i) * f.A.col(i) * f.B.col(i).transpose();
    out.push_back({X, distance_sq(U, X), "svd" + index_list(subset)});
  }
  return out;
}

Mat embed(const Mat& block, const std::vector<int>& rows, const std::vector<int>& cols, Eigen::Index m,
          Eigen::Index n) {
  Mat X = Mat::Zero(m, n);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) X(rows[i], cols[j]) = block(i, j);
  return X;
}

std::string block_label(const Block& b) { return "rows" + index_list(b.rows) + "x cols" + index_list(b.cols); }

}  // namespace

std::vector<RealCriticalPoint> eckart_young_points(const Mat& U, int r, const SpectralTolerances& tol) {
  if (r < 1) throw ContractViolation("eckart_young_points: rank must be at least 1");
  const int k = spectral_rank(svd(U).sigma, tol);
  if (r > k) throw ContractViolation("eckart_young_points: rank exceeds rank(U)");
  return ey_points(U, r, tol, "");
}

SelectionResult select_best(std::vector<RealCriticalPoint> points) {
  SelectionResult res;
  if (points.empty()) throw ContractViolation("select_best: no candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].distance_sq < points[best].distance_sq) best = i;
  const double d = points[best].distance_sq;
  const double tie_tol = 1e-12 * std::max(1.0, d);
  // earliest candidate in list order among near-ties
  std::size_t chosen = points.size();
  int near = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].distance_sq - d > tie_tol) continue;
    ++near;
    if (chosen == points.size()) chosen = i;
  }
  res.tie = near > 1;
  res.best = points[chosen];
  res.all = std::move(points);
  return res;
}

SelectionResult best_rank1_structured(const Mat& U, const ZeroPattern& S, const SpectralTolerances& tol) {
  if (U.rows() != S.rows() || U.cols() != S.cols()) throw ContractViolation("matrix and pattern shapes differ");
  if (!U.allFinite()) throw ContractViolation("matrix has non-finite entries");
  const int m = S.rows(), n = S.cols();
  std::vector<RealCriticalPoint> all;
  for (const auto& cover : minimal_covers(S)) {
    const std::vector<int> keep_rows = complement(cover.rows, m);
    const std::vector<int> keep_cols = complement(cover.cols, n);
    if (keep_rows.empty() || keep_cols.empty()) continue;
    const std::string label = "cover(rows" + index_list(cover.rows) + ",cols" + index_list(cover.cols) + ")";
    const Mat sub = submatrix(U, keep_rows, keep_cols);
    for (auto& p : ey_points(sub, 1, tol, label)) {
      Mat X = embed(p.X, keep_rows, keep_cols, m, n);
      const double scale = 1e-12 * (1.0 + X.norm());
      const bool duplicate = std::any_of(all.begin(), all.end(), [&](const RealCriticalPoint& q) {
        return (q.X - X).norm() <= scale;
      });
      if (duplicate) continue;
      all.push_back({X, distance_sq(U, X), label + ":" + p.provenance});
    }
  }
  if (all.empty()) {
    // every cover leaves an empty or zero block: the zero matrix is the only point
    all.push_back({Mat::Zero(m, n), U.squaredNorm(), "zero"});
  }
  return select_best(std::move(all));
}

bool rectangular_complement(const ZeroPattern& S, Block& block) {
  std::vector<Block> blocks;
  if (!block_diagonal_complement(S, blocks) || blocks.size() > 1) return false;
  block = blocks.empty() ? Block{} : blocks.front();
  return true;
}

bool block_diagonal_complement(const ZeroPattern& S, std::vector<Block>& blocks) {
  const int m = S.rows(), n = S.cols();
  const MaskMatrix mask = mask_matrix(S);
  // connected components of the bipartite graph of free positions
  std::vector<int> row_comp(m, -1), col_comp(n, -1);
  std::vector<Block> found;
  for (int start = 0; start < m; ++start) {
    if (row_comp[start] >= 0) continue;
    bool has_free = false;
    for (int j = 0; j < n; ++j) has_free = has_free || !mask.bit(start, j);
    if (!has_free) continue;
    const int id = static_cast<int>(found.size());
    found.push_back({});
    std::vector<std::pair<bool, int>> stack{{true, start}};
    row_comp[start] = id;
    while (!stack.empty()) {
      auto [is_row, v] = stack.back();
      stack.pop_back();
      if (is_row) {
        found[id].rows.push_back(v);
        for (int j = 0; j < n; ++j)
          if (!mask.bit(v, j) && col_comp[j] < 0) {
            col_comp[j] = id;
            stack.push_back({false, j});
          }
      } else {
        found[id].cols.push_back(v);
        for (int i = 0; i < m; ++i)
          if (!mask.bit(i, v) && row_comp[i] < 0) {
            row_comp[i] = id;
            stack.push_back({true, i});
          }
      }
    }
  }
  for (auto& b : found) {
    std::sort(b.rows.begin(), b.rows.end());
    std::sort(b.cols.begin(), b.cols.end());
    for (int i : b.rows)
      for (int j : b.cols)
        if (mask.bit(i, j)) return false;
  }
  blocks = std::move(found);
  return true;
}

std::vector<RealCriticalPoint> rectangular_rank_r(const Mat& U, const ZeroPattern& S, int r,
                                                  const SpectralTolerances& tol) {
  if (U.rows() != S.rows() || U.cols() != S.cols()) throw ContractViolation("matrix and pattern shapes differ");
  Block block;
  if (!rectangular_complement(S, block))
    throw ContractViolation("rectangular_rank_r: complement of the pattern is not a rectangle");
  const int cap = static_cast<int>(std::min(block.rows.size(), block.cols.size()));
  if (r < 1 || r > cap) throw ContractViolation("rectangular_rank_r: rank out of range for the free block");
  std::vector<RealCriticalPoint> out;
  const Mat sub = submatrix(U, block.rows, block.cols);
  for (auto& p : ey_points(sub, r, tol, block_label(block))) {
    Mat X = embed(p.X, block.rows, block.cols, U.rows(), U.cols());
    out.push_back({X, distance_sq(U, X), p.provenance});
  }
  return out;
}

std::vector<RealCriticalPoint> block_diagonal_rank_r(const Mat& U, const std::vector<Block>& blocks, int r,
                                                     const SpectralTolerances& tol) {
  if (r < 1) throw ContractViolation("block_diagonal_rank_r: rank must be at least 1");
  std::vector<bool> row_used(U.rows(), false), col_used(U.cols(), false);
  for (const auto& b : blocks) {
    for (int i : b.rows) {
      if (i < 0 || i >= U.rows()) throw ContractViolation("block row index out of range");
      if (row_used[i]) throw ContractViolation("block_diagonal_rank_r: blocks overlap in rows");
      row_used[i] = true;
    }
    for (int j : b.cols) {
      if (j < 0 || j >= U.cols()) throw ContractViolation("block column index out of range");
      if (col_used[j]) throw ContractViolation("block_diagonal_rank_r: blocks overlap in columns");
      col_used[j] = true;
    }
  }
  const std::size_t s = blocks.size();
  // per-block critical point lists, computed lazily for each rank
  std::vector<std::vector<std::vector<RealCriticalPoint>>> cache(s);
  std::vector<int> caps(s);
  for (std::size_t b = 0; b < s; ++b) {
    caps[b] = static_cast<int>(std::min(blocks[b].rows.size(), blocks[b].cols.size()));
    cache[b].resize(caps[b] + 1);
    const Mat sub = submatrix(U, blocks[b].rows, blocks[b].cols);
    for (int rb = 0; rb <= std::min(caps[b], r); ++rb) cache[b][rb] = ey_points(sub, rb, tol, block_label(blocks[b]));
  }

  std::vector<RealCriticalPoint> out;
  std::vector<int> comp(s, 0);
  std::vector<std::size_t> pick(s, 0);
  // enumerate compositions with r_1 descending first, so (r, 0, ...) comes first
  auto emit_products = [&]() {
    for (std::size_t b = 0; b < s; ++b)
      if (cache[b][comp[b]].empty()) return;
    std::fill(pick.begin(), pick.end(), 0);
    for (;;) {
      Mat X = Mat::Zero(U.rows(), U.cols());
      std::ostringstream prov;
      prov << "blocks(";
      for (std::size_t b = 0; b < s; ++b) prov << (b ? "," : "") << comp[b];
      prov << ")";
      for (std::size_t b = 0; b < s; ++b) {
        const auto& p = cache[b][comp[b]][pick[b]];
        X += embed(p.X, blocks[b].rows, blocks[b].cols, U.rows(), U.cols());
        prov << (b ? "|" : ":") << p.provenance;
      }
      out.push_back({X, distance_sq(U, X), prov.str()});
      std::size_t b = s;
      while (b > 0) {
        --b;
        if (++pick[b] < cache[b][comp[b]].size()) break;
        pick[b] = 0;
        if (b == 0) return;
      }
      if (s == 0) return;
    }
  };
  auto recurse = [&](auto&& self, std::size_t b, int remaining) -> void {
    if (b == s) {
      if (remaining == 0) emit_products();
      return;
    }
    for (int rb = std::min(caps[b], remaining); rb >= 0; --rb) {
      comp[b] = rb;
      self(self, b + 1, remaining - rb);
    }
  };
  recurse(recurse, 0, r);
  return out;
}

Mat project_onto_pattern(const Mat& U, const ZeroPattern& S) {
  if (U.rows() != S.rows() || U.cols() != S.cols()) throw ContractViolation("matrix and pattern shapes differ");
  Mat P = U;
  for (const auto& [i, j] : S.entries()) P(i, j) = 0.0;
  return P;
}

}  // namespace lraz
